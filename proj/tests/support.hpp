#pragma once

// Shared helpers for the test suites: fixture loading and seeded random
// profile generators. Everything is deterministic given the generator seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "convote/convote.hpp"

namespace testsupport {

using namespace convote;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("missing file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline PreferenceProfile load_fixture(const std::string& name) {
    return parse_profile(read_file(std::string(CONVOTE_FIXTURE_DIR) + "/" + name));
}

inline CandidateRoster letters(std::size_t k) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i)
        names.emplace_back(1, static_cast<char>('A' + i));
    return CandidateRoster(names);
}

/// Ballot holding a total order on `order` (most-preferred-first indices).
inline Ballot chain_ballot(const CandidateRoster& roster, const std::vector<std::size_t>& order,
                           std::uint64_t weight) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            pairs.emplace_back(order[i], order[j]);
    return {weight, close_ballot(roster, pairs)};
}

inline std::vector<std::size_t> random_permutation(Xoshiro256StarStar& rng, std::size_t k) {
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i)
        perm[i] = i;
    for (std::size_t i = k; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.below(i)]);
    return perm;
}

/// Random profile of full-chain ballots: up to max_voters voters spread over
/// weighted lines.
inline PreferenceProfile random_chain_profile(Xoshiro256StarStar& rng, std::size_t min_k,
                                              std::size_t max_k, std::uint64_t max_voters) {
    const std::size_t k = min_k + static_cast<std::size_t>(rng.below(max_k - min_k + 1));
    PreferenceProfile profile{letters(k), {}};
    std::uint64_t remaining = 1 + rng.below(max_voters);
    while (remaining > 0) {
        const std::uint64_t weight = 1 + rng.below(std::min<std::uint64_t>(remaining, 5));
        profile.ballots.push_back(chain_ballot(profile.roster, random_permutation(rng, k), weight));
        remaining -= weight;
    }
    return profile;
}

/// Random profile of partial ballots: each line is a chain over a random
/// subset of the roster (unlisted candidates stay incomparable).
inline PreferenceProfile random_partial_profile(Xoshiro256StarStar& rng, std::size_t min_k,
                                                std::size_t max_k, std::uint64_t max_voters) {
    const std::size_t k = min_k + static_cast<std::size_t>(rng.below(max_k - min_k + 1));
    PreferenceProfile profile{letters(k), {}};
    std::uint64_t remaining = 1 + rng.below(max_voters);
    while (remaining > 0) {
        const std::uint64_t weight = 1 + rng.below(std::min<std::uint64_t>(remaining, 5));
        auto perm = random_permutation(rng, k);
        const std::size_t listed = rng.below(k + 1);
        perm.resize(listed);
        profile.ballots.push_back(chain_ballot(profile.roster, perm, weight));
        remaining -= weight;
    }
    return profile;
}

inline bool strongly_connected(const PreferenceProfile& profile) {
    const ChainDecomposition dec = decompose(convergence_chain(profile));
    return dec.transient.empty() && dec.closed_classes.size() == 1 &&
           dec.closed_classes.front().size() == profile.roster.size();
}

/// Random profile whose complemented chain is one communication class.
inline PreferenceProfile random_connected_profile(Xoshiro256StarStar& rng, std::size_t min_k,
                                                  std::size_t max_k, std::uint64_t max_voters) {
    for (;;) {
        PreferenceProfile profile = random_chain_profile(rng, min_k, max_k, max_voters);
        if (strongly_connected(profile))
            return profile;
    }
}

/// Force every ballot to rank candidate `a` over candidate `b` by swapping
/// the two inside any ballot that disagrees. Chains stay chains.
inline void plant_unanimous(PreferenceProfile& profile, std::size_t a, std::size_t b) {
    for (auto& ballot : profile.ballots) {
        if (ballot.prefers(a, b))
            continue;
        auto pairs = ballot.relation.pairs();
        for (auto& [x, y] : pairs) {
            if (x == a) x = b; else if (x == b) x = a;
            if (y == a) y = b; else if (y == b) y = a;
        }
        ballot.relation = close_ballot(profile.roster, pairs);
    }
}

inline double l1_error(const std::vector<double>& got, const std::vector<Rational>& expected) {
    double err = 0;
    for (std::size_t i = 0; i < got.size(); ++i)
        err += std::abs(got[i] - to_double(expected[i]));
    return err;
}

inline double linf_error(const std::vector<double>& got, const std::vector<Rational>& expected) {
    double err = 0;
    for (std::size_t i = 0; i < got.size(); ++i)
        err = std::max(err, std::abs(got[i] - to_double(expected[i])));
    return err;
}

inline std::vector<Rational> fractions(const std::vector<std::int64_t>& nums, std::int64_t den) {
    std::vector<Rational> out;
    for (std::int64_t n : nums)
        out.emplace_back(n, den);
    return out;
}

} // namespace testsupport
