#include "cogsim/memory.hpp"

#include "cogsim/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace cogsim {

std::array<double, 16> pool_salience(const SalienceMap& sal) {
    std::array<double, 16> pooled{};
    constexpr int kernel = kGridSize / 4;
    for (int py = 0; py < 4; ++py) {
        for (int px = 0; px < 4; ++px) {
            double best = sal.cells.at(py * kernel, px * kernel);
            for (int sy = 0; sy < kernel; ++sy)
                for (int sx = 0; sx < kernel; ++sx)
                    best = std::max(best, sal.cells.at(py * kernel + sy, px * kernel + sx));
            pooled[static_cast<std::size_t>(py) * 4 + px] = best;
        }
    }
    return pooled;
}

StateId encode_state(const SalienceMap& sal, const BinarizeParams& params) {
    const std::array<double, 16> pooled = pool_salience(sal);
    double mean = 0.0;
    for (double v : pooled) mean += v;
    mean /= 16.0;

    StateId id = 0;
    for (int i = 0; i < 16; ++i)
        if (pooled[static_cast<std::size_t>(i)] > mean && pooled[static_cast<std::size_t>(i)] > params.floor)
            id = static_cast<StateId>(id | (1u << i));
    return id;
}

const Schema* ProceduralMemory::recall(StateId s) const {
    auto it = schemas_.find(s);
    return it == schemas_.end() ? nullptr : &it->second;
}

const Schema& ProceduralMemory::assimilate(StateId s, int episode, Rng& rng) {
    if (schemas_.contains(s))
        throw DuplicateSchemaError("assimilate: schema already exists for state " + std::to_string(s));
    Schema schema;
    schema.state = s;
    schema.created_episode = episode;
    schema.q.resize(static_cast<std::size_t>(action_count_));
    for (double& v : schema.q) v = rng.uniform(0.0, kQInitMax);
    return schemas_.emplace(s, std::move(schema)).first->second;
}

double ProceduralMemory::accommodate(StateId s, int action_index, double reward, StateId next,
                                     double alpha, double gamma) {
    auto it = schemas_.find(s);
    auto next_it = schemas_.find(next);
    if (it == schemas_.end())
        throw MissingSchemaError("accommodate: no schema for state " + std::to_string(s));
    if (next_it == schemas_.end())
        throw MissingSchemaError("accommodate: no schema for next state " + std::to_string(next));

    const double next_max = *std::max_element(next_it->second.q.begin(), next_it->second.q.end());
    double& q = it->second.q[static_cast<std::size_t>(action_index)];
    q += alpha * (reward + gamma * next_max - q);
    ++it->second.visit_count;
    return q;
}

double ProceduralMemory::accommodate_terminal(StateId s, int action_index, double reward, double alpha) {
    auto it = schemas_.find(s);
    if (it == schemas_.end())
        throw MissingSchemaError("accommodate: no schema for state " + std::to_string(s));
    double& q = it->second.q[static_cast<std::size_t>(action_index)];
    q += alpha * (reward - q);
    ++it->second.visit_count;
    return q;
}

ProceduralMemory transfer(const ProceduralMemory& prior, int new_action_count, Rng& rng) {
    if (new_action_count < prior.action_count_)
        throw TransferShrinkError("transfer: cannot shrink action set from " +
                                  std::to_string(prior.action_count_) + " to " +
                                  std::to_string(new_action_count));
    ProceduralMemory next(new_action_count);
    next.schemas_ = prior.schemas_;
    if (new_action_count > prior.action_count_) {
        for (auto& [state, schema] : next.schemas_) {
            schema.q.resize(static_cast<std::size_t>(new_action_count));
            for (int a = prior.action_count_; a < new_action_count; ++a)
                schema.q[static_cast<std::size_t>(a)] = rng.uniform(0.0, kQInitMax);
        }
    }
    return next;
}

namespace {

constexpr char kMagic[4] = {'C', 'G', 'P', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct Reader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void need(std::size_t n, const char* what) const {
        if (pos + n > bytes.size())
            throw MalformedMemoryError(std::string("truncated memory file while reading ") + what, pos);
    }
    std::uint16_t u16(const char* what) {
        need(2, what);
        std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
};

} // namespace

std::vector<std::uint8_t> save(const ProceduralMemory& mem) {
    std::vector<std::uint8_t> out;
    out.reserve(24 + mem.schemas_.size() * (10 + 8 * static_cast<std::size_t>(mem.action_count_)));
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(mem.action_count_));
    put_u32(out, static_cast<std::uint32_t>(mem.action_set_version_));
    put_u64(out, mem.schemas_.size());
    for (const auto& [state, schema] : mem.schemas_) {
        put_u16(out, state);
        put_u32(out, static_cast<std::uint32_t>(schema.created_episode));
        put_u32(out, static_cast<std::uint32_t>(schema.visit_count));
        for (double q : schema.q) put_u64(out, std::bit_cast<std::uint64_t>(q));
    }
    return out;
}

ProceduralMemory load(std::span<const std::uint8_t> bytes) {
    Reader in{bytes};
    in.need(4, "magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw MalformedMemoryError("bad magic, not a memory file", 0);
    in.pos = 4;
    const std::uint32_t version = in.u32("format version");
    if (version != kFormatVersion)
        throw MalformedMemoryError("unsupported format version " + std::to_string(version), 4);

    const std::uint32_t action_count = in.u32("action count");
    const std::uint32_t set_version = in.u32("action set version");
    if (action_count == 0 || action_count > 64)
        throw MalformedMemoryError("implausible action count " + std::to_string(action_count), 8);
    const std::uint64_t count = in.u64("schema count");

    ProceduralMemory mem(static_cast<int>(action_count));
    mem.action_set_version_ = static_cast<int>(set_version);
    for (std::uint64_t i = 0; i < count; ++i) {
        Schema schema;
        schema.state = in.u16("state id");
        schema.created_episode = static_cast<int>(in.u32("created episode"));
        schema.visit_count = static_cast<int>(in.u32("visit count"));
        schema.q.resize(action_count);
        for (std::uint32_t a = 0; a < action_count; ++a)
            schema.q[a] = std::bit_cast<double>(in.u64("q value"));
        if (mem.schemas_.contains(schema.state))
            throw MalformedMemoryError("duplicate state id " + std::to_string(schema.state), in.pos);
        mem.schemas_.emplace(schema.state, std::move(schema));
    }
    if (in.pos != bytes.size())
        throw MalformedMemoryError("trailing bytes after schema table", in.pos);
    return mem;
}

void save_file(const ProceduralMemory& mem, const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = save(mem);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

ProceduralMemory load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("cannot open: " + path.string());
    const std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) throw IoError("read failed: " + path.string());
    return load(bytes);
}

std::string memory_csv(const ProceduralMemory& mem) {
    std::string out = "state_id";
    for (int a = 0; a < mem.action_count(); ++a) {
        out += ",q_";
        out += std::to_string(a);
    }
    out += ",created_episode,visit_count\n";
    char buf[40];
    for (const auto& [state, schema] : mem.schemas()) {
        out += std::to_string(state);
        for (double q : schema.q) {
            std::snprintf(buf, sizeof(buf), ",%.17g", q);
            out += buf;
        }
        out += ',';
        out += std::to_string(schema.created_episode);
        out += ',';
        out += std::to_string(schema.visit_count);
        out += '\n';
    }
    return out;
}

} // namespace cogsim
