#include "cogsim/memory.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace cogsim;

namespace {

// Brute-force pooling oracle, written independently of pool_salience.
std::array<double, 16> pool_oracle(const SalienceMap& sal) {
    std::array<double, 16> out{};
    for (int i = 0; i < 16; ++i) {
        double best = -1e300;
        for (int row = 0; row < kGridSize; ++row)
            for (int col = 0; col < kGridSize; ++col)
                if (row / 4 == i / 4 && col / 4 == i % 4)
                    best = std::max(best, sal.cells.at(row, col));
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

SalienceMap random_salience(Rng& rng) {
    SalienceMap sal;
    for (double& v : sal.cells.cells) v = rng.uniform() < 0.4 ? rng.uniform() : 0.0;
    return sal;
}

} // namespace

TEST_CASE("encode_state basics") {
    SalienceMap sal;
    CHECK(encode_state(sal) == 0);

    SUBCASE("single active cell sets only its pooled bit") {
        sal.cells.at(0, 0) = 1.0;
        CHECK(encode_state(sal) == 1);
    }
    SUBCASE("an isolated peak in the last pooled block sets bit 15") {
        sal.cells.at(15, 15) = 0.7;
        CHECK(encode_state(sal) == (1u << 15));
    }
    SUBCASE("uniform positive salience binarizes to zero") {
        for (double& v : sal.cells.cells) v = 0.5;
        CHECK(encode_state(sal) == 0);
    }
    SUBCASE("values below the absolute floor never activate") {
        sal.cells.at(3, 3) = 0.009;
        CHECK(encode_state(sal) == 0);
    }
}

TEST_CASE("encode_state agrees with the brute-force pooling oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const SalienceMap sal = random_salience(rng);
        const auto pooled = pool_salience(sal);
        const auto expected_pool = pool_oracle(sal);
        for (int i = 0; i < 16; ++i)
            REQUIRE(pooled[static_cast<std::size_t>(i)] ==
                    doctest::Approx(expected_pool[static_cast<std::size_t>(i)]).epsilon(1e-12));

        double mean = 0.0;
        for (double v : expected_pool) mean += v;
        mean /= 16.0;
        StateId expected = 0;
        for (int i = 0; i < 16; ++i)
            if (expected_pool[static_cast<std::size_t>(i)] > mean &&
                expected_pool[static_cast<std::size_t>(i)] > 0.01)
                expected = static_cast<StateId>(expected | (1u << i));
        REQUIRE(encode_state(sal) == expected);
    }
}

TEST_CASE("encode_state is a pure function of the map") {
    Rng rng(7);
    const SalienceMap sal = random_salience(rng);
    SalienceMap copy = sal;
    CHECK(encode_state(sal) == encode_state(copy));
}

TEST_CASE("all 16 bit positions are reachable") {
    for (int bit = 0; bit < 16; ++bit) {
        SalienceMap sal;
        sal.cells.at((bit / 4) * 4 + 1, (bit % 4) * 4 + 2) = 0.9;
        REQUIRE(encode_state(sal) == static_cast<StateId>(1u << bit));
    }
}

TEST_CASE("floor-only binarization is monotone in any single cell") {
    Rng rng(15);
    for (int trial = 0; trial < 300; ++trial) {
        const SalienceMap sal = random_salience(rng);
        const auto before = pool_salience(sal);
        SalienceMap bumped = sal;
        const int row = static_cast<int>(rng.next_below(16));
        const int col = static_cast<int>(rng.next_below(16));
        bumped.cells.at(row, col) += rng.uniform();
        const auto after = pool_salience(bumped);
        for (int i = 0; i < 16; ++i) {
            const bool was_set = before[static_cast<std::size_t>(i)] > 0.01;
            const bool is_set = after[static_cast<std::size_t>(i)] > 0.01;
            if (was_set) REQUIRE(is_set);
        }
    }
}

TEST_CASE("recall and assimilate") {
    ProceduralMemory mem(10);
    Rng rng(3);

    CHECK(mem.recall(123) == nullptr);

    const Schema& created = mem.assimilate(123, 4, rng);
    CHECK(mem.size() == 1);
    CHECK(created.state == 123);
    CHECK(created.created_episode == 4);
    CHECK(created.visit_count == 0);
    REQUIRE(created.q.size() == 10);
    for (double q : created.q) {
        CHECK(q >= 0.0);
        CHECK(q < kQInitMax);
    }

    const Schema* recalled = mem.recall(123);
    REQUIRE(recalled != nullptr);
    CHECK(*recalled == created);
    CHECK(recalled->visit_count == 0); // recall never mutates

    CHECK_THROWS_AS(mem.assimilate(123, 5, rng), DuplicateSchemaError);
}

TEST_CASE("assimilate draws identical values under identical seeds") {
    ProceduralMemory a(17), b(17);
    Rng rng_a(88), rng_b(88);
    for (StateId s : {10, 20, 30}) {
        a.assimilate(s, 0, rng_a);
        b.assimilate(s, 0, rng_b);
    }
    CHECK(a == b);
}

TEST_CASE("accommodate applies the one-step update") {
    ProceduralMemory mem(3);
    Rng rng(5);
    mem.assimilate(1, 0, rng);
    mem.assimilate(2, 0, rng);

    SUBCASE("direct substitution: q=0, r=1, empty future gives 0.9") {
        ProceduralMemory hand(3);
        Rng r2(9);
        hand.assimilate(1, 0, r2);
        hand.assimilate(2, 0, r2);
        // Pin the involved values to exact zero through full-rate terminal updates.
        for (int a = 0; a < 3; ++a) {
            hand.accommodate_terminal(1, a, 0.0, 1.0);
            hand.accommodate_terminal(2, a, 0.0, 1.0);
        }
        const double updated = hand.accommodate(1, 0, 1.0, 2, 0.9, 0.99);
        CHECK(updated == doctest::Approx(0.9).epsilon(1e-12));
    }

    SUBCASE("fixed point when q(s,a) = gamma * max q(next)") {
        ProceduralMemory hand(2);
        Rng r2(11);
        hand.assimilate(1, 0, r2);
        hand.assimilate(2, 0, r2);
        const double next_max = *std::max_element(hand.recall(2)->q.begin(),
                                                  hand.recall(2)->q.end());
        // Move q(1, 0) exactly onto the fixed point via a terminal update.
        const double target = 0.99 * next_max;
        hand.accommodate_terminal(1, 0, target, 1.0);
        const double updated = hand.accommodate(1, 0, 0.0, 2, 0.9, 0.99);
        CHECK(updated == doctest::Approx(target).epsilon(1e-12));
    }

    SUBCASE("missing schemas raise") {
        CHECK_THROWS_AS(mem.accommodate(99, 0, 1.0, 1, 0.9, 0.99), MissingSchemaError);
        CHECK_THROWS_AS(mem.accommodate(1, 0, 1.0, 99, 0.9, 0.99), MissingSchemaError);
    }

    SUBCASE("visit counts increment") {
        const int before = mem.recall(1)->visit_count;
        mem.accommodate(1, 2, 0.5, 2, 0.9, 0.99);
        CHECK(mem.recall(1)->visit_count == before + 1);
    }
}

// Oracle: an independently coded one-step update.
TEST_CASE("accommodate matches an independent implementation on random instances") {
    Rng rng(31337);
    ProceduralMemory mem(17);
    mem.assimilate(1, 0, rng);
    mem.assimilate(2, 0, rng);

    for (int trial = 0; trial < 10000; ++trial) {
        const int action = static_cast<int>(rng.next_below(17));
        const double reward = rng.uniform(-10.0, 3.0);
        const double alpha = rng.uniform(0.05, 1.0);
        const double gamma = rng.uniform(0.0, 1.0);

        const double q_old = mem.recall(1)->q[static_cast<std::size_t>(action)];
        double next_max = mem.recall(2)->q[0];
        for (double v : mem.recall(2)->q) next_max = std::max(next_max, v);
        const double expected = q_old + alpha * (reward + gamma * next_max - q_old);

        const double updated = mem.accommodate(1, action, reward, 2, alpha, gamma);
        REQUIRE(std::abs(updated - expected) <= 1e-12);
    }
}

TEST_CASE("transfer keeps shared q values bit-identical and appends fresh slots") {
    Rng rng(17);
    ProceduralMemory prior(10);
    for (StateId s : {5, 6, 7, 900}) prior.assimilate(s, 1, rng);
    prior.accommodate(5, 3, 2.0, 6, 0.9, 0.99);

    Rng transfer_rng(18);
    const ProceduralMemory grown = transfer(prior, 17, transfer_rng);
    CHECK(grown.action_count() == 17);
    CHECK(grown.action_set_version() == 17);
    REQUIRE(grown.size() == prior.size());
    for (const auto& [state, schema] : prior.schemas()) {
        const Schema* next = grown.recall(state);
        REQUIRE(next != nullptr);
        REQUIRE(next->q.size() == 17);
        for (int a = 0; a < 10; ++a)
            REQUIRE(next->q[static_cast<std::size_t>(a)] == schema.q[static_cast<std::size_t>(a)]);
        for (int a = 10; a < 17; ++a) {
            REQUIRE(next->q[static_cast<std::size_t>(a)] >= 0.0);
            REQUIRE(next->q[static_cast<std::size_t>(a)] < kQInitMax);
        }
    }

    SUBCASE("equal counts are a deep copy") {
        Rng r2(19);
        const ProceduralMemory copy = transfer(prior, 10, r2);
        CHECK(copy == prior);
    }
    SUBCASE("shrinking raises") {
        Rng r2(20);
        CHECK_THROWS_AS(transfer(prior, 9, r2), TransferShrinkError);
    }
    SUBCASE("argmax over shared actions survives when it clears the init range") {
        Rng r2(21);
        ProceduralMemory strong(10);
        strong.assimilate(40, 0, r2);
        strong.accommodate_terminal(40, 4, 5.0, 1.0); // q = 5 > 0.1
        const ProceduralMemory after = transfer(strong, 17, r2);
        const auto& q = after.recall(40)->q;
        CHECK(std::max_element(q.begin(), q.end()) - q.begin() == 4);
    }
}

TEST_CASE("save/load round-trips exactly") {
    SUBCASE("empty memory") {
        const ProceduralMemory empty(10);
        CHECK(load(save(empty)) == empty);
    }
    SUBCASE("a thousand random schemas") {
        Rng rng(404);
        ProceduralMemory mem(17);
        int added = 0;
        while (added < 1000) {
            const StateId s = static_cast<StateId>(rng.next_below(65536));
            if (mem.recall(s)) continue;
            mem.assimilate(s, static_cast<int>(rng.next_below(200)), rng);
            ++added;
        }
        for (int i = 0; i < 500; ++i) {
            auto it = mem.schemas().begin();
            std::advance(it, static_cast<long>(rng.next_below(1000)));
            auto jt = mem.schemas().begin();
            std::advance(jt, static_cast<long>(rng.next_below(1000)));
            mem.accommodate(it->first, static_cast<int>(rng.next_below(17)),
                            rng.uniform(-10, 3), jt->first, 0.9, 0.99);
        }
        CHECK(load(save(mem)) == mem);
    }
    SUBCASE("truncation fails loudly, nothing partial") {
        Rng rng(11);
        ProceduralMemory mem(10);
        mem.assimilate(3, 0, rng);
        mem.assimilate(4, 0, rng);
        std::vector<std::uint8_t> bytes = save(mem);
        for (std::size_t cut : {bytes.size() - 1, bytes.size() / 2, std::size_t{3}}) {
            std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<long>(cut));
            CHECK_THROWS_AS(load(truncated), MalformedMemoryError);
        }
    }
    SUBCASE("trailing bytes are rejected") {
        const ProceduralMemory mem(10);
        std::vector<std::uint8_t> bytes = save(mem);
        bytes.push_back(0);
        CHECK_THROWS_AS(load(bytes), MalformedMemoryError);
    }
    SUBCASE("bad magic is rejected") {
        std::vector<std::uint8_t> bytes = {'n', 'o', 'p', 'e', 0, 0, 0, 0};
        CHECK_THROWS_AS(load(bytes), MalformedMemoryError);
    }
}

TEST_CASE("memory csv export lists one row per schema") {
    Rng rng(2);
    ProceduralMemory mem(10);
    mem.assimilate(7, 0, rng);
    mem.assimilate(300, 1, rng);
    const std::string csv = memory_csv(mem);
    CHECK(csv.find("state_id,q_0") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3); // header + 2 rows
    CHECK(csv.find("\n7,") != std::string::npos);
    CHECK(csv.find("\n300,") != std::string::npos);
}
