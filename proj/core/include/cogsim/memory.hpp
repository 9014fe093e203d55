#pragma once
#include "cogsim/attention.hpp"
#include "cogsim/rng.hpp"
#include "cogsim/world.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cogsim {

// Single-slot buffer of the most recent observation.
struct SensoryMemory {
    Observation latest;
};

// 16-bit packed binarized 4x4 pooled salience grid, row-major, bit 0 = (0,0).
using StateId = std::uint16_t;

struct BinarizeParams {
    // A pooled cell is active when it exceeds both the mean of the 16 pooled
    // values and this absolute floor (which keeps all-noise frames at state 0).
    double floor = 0.01;
};

// Max-pool 16x16 -> 4x4 with kernel 4, stride 4.
std::array<double, 16> pool_salience(const SalienceMap& sal);

StateId encode_state(const SalienceMap& sal, const BinarizeParams& params = {});

struct Schema {
    StateId state = 0;
    std::vector<double> q; // one entry per enabled action
    int created_episode = 0;
    int visit_count = 0;

    bool operator==(const Schema&) const = default;
};

struct DuplicateSchemaError : std::logic_error {
    using std::logic_error::logic_error;
};
struct MissingSchemaError : std::logic_error {
    using std::logic_error::logic_error;
};
struct TransferShrinkError : std::logic_error {
    using std::logic_error::logic_error;
};

// Malformed persisted memory; `offset` is the byte position of the problem.
struct MalformedMemoryError : std::runtime_error {
    std::size_t offset;
    MalformedMemoryError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg), offset(off) {}
};

inline constexpr double kQInitMax = 0.1; // fresh q values are uniform in [0, 0.1)

// Schema store: one QTable row per encountered state.
class ProceduralMemory {
public:
    ProceduralMemory() = default;
    explicit ProceduralMemory(int action_count)
        : action_count_(action_count), action_set_version_(action_count) {}

    int action_count() const { return action_count_; }
    int action_set_version() const { return action_set_version_; }
    std::size_t size() const { return schemas_.size(); }
    const std::map<StateId, Schema>& schemas() const { return schemas_; }

    // nullptr when the state is unknown; never mutates.
    const Schema* recall(StateId s) const;

    // Create a schema with q ~ U[0, 0.1); throws DuplicateSchemaError if one
    // already exists (a caller bug).
    const Schema& assimilate(StateId s, int episode, Rng& rng);

    // One-step Q update:
    //   q(s,a) += alpha * (r + gamma * max_a' q(next, a') - q(s,a))
    // Returns the updated value; throws MissingSchemaError when either row is
    // absent.
    double accommodate(StateId s, int action_index, double reward, StateId next,
                       double alpha, double gamma);

    // Update for absorbing transitions (episode-ending events): no bootstrap
    // from a successor state.
    double accommodate_terminal(StateId s, int action_index, double reward, double alpha);

    friend ProceduralMemory transfer(const ProceduralMemory& prior, int new_action_count, Rng& rng);
    friend std::vector<std::uint8_t> save(const ProceduralMemory& mem);
    friend ProceduralMemory load(std::span<const std::uint8_t> bytes);

    bool operator==(const ProceduralMemory&) const = default;

private:
    std::map<StateId, Schema> schemas_;
    int action_count_ = 0;
    int action_set_version_ = 0;
};

// Copy every schema, keeping shared-action q values bit-identical and drawing
// fresh U[0, 0.1) values for appended action slots.
ProceduralMemory transfer(const ProceduralMemory& prior, int new_action_count, Rng& rng);

// Versioned little-endian binary; load(save(m)) is structurally identical to m.
std::vector<std::uint8_t> save(const ProceduralMemory& mem);
ProceduralMemory load(std::span<const std::uint8_t> bytes);

void save_file(const ProceduralMemory& mem, const std::filesystem::path& path);
ProceduralMemory load_file(const std::filesystem::path& path);

// Human-readable export: state_id, q_0..q_N, created_episode, visit_count.
std::string memory_csv(const ProceduralMemory& mem);

} // namespace cogsim
