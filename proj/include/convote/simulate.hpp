#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "convote/ballots.hpp"
#include "convote/chain.hpp"
#include "convote/common.hpp"
#include "convote/rational.hpp"
#include "convote/rng.hpp"

#include "json.hpp"

namespace convote {

/// The support distributions s0, s1, ... produced by the negotiation rounds.
struct SupportTrajectory {
    std::vector<Distribution> steps;
    std::optional<std::size_t> converged_at; // index of the first step whose L1 change < tol
    std::vector<double> l1_deltas;           // l1_deltas[i] = |steps[i+1] - steps[i]|_1
};

/// One negotiation round, implemented by the literal share-transfer procedure
/// rather than a matrix product, so agreement with the chain module is a
/// genuine cross-check: every voter splits her share of each option's support
/// into |K|-1 parts and hands each part to the alternative she prefers,
/// keeping the parts for alternatives she does not prefer.
inline Distribution negotiation_step(const PreferenceProfile& profile, const Distribution& s) {
    if (!(s.roster() == profile.roster))
        throw InputError("support roster does not match the profile");
    detail::require_relations_sized(profile);
    const std::size_t k = profile.roster.size();
    const std::uint64_t voters = profile.total_voters();
    if (voters == 0 || k <= 1)
        return s; // nobody redistributes anything
    const Rational denom = Rational(voters) * static_cast<std::uint64_t>(k - 1);

    std::vector<Rational> next(k, 0);
    for (const auto& ballot : profile.ballots) {
        if (ballot.weight == 0)
            continue;
        for (std::size_t c = 0; c < k; ++c) {
            if (s.at(c) == 0)
                continue;
            const Rational part = s.at(c) * ballot.weight / denom;
            for (std::size_t alt = 0; alt < k; ++alt) {
                if (alt == c)
                    continue;
                if (ballot.prefers(alt, c))
                    next[alt] += part;
                else
                    next[c] += part;
            }
        }
    }
    return Distribution(profile.roster, std::move(next));
}

/// Iterate negotiation rounds from the uniform support function until the L1
/// change drops below tol (compared in floating point) or max_rounds is hit.
inline SupportTrajectory negotiate(const PreferenceProfile& profile,
                                   std::size_t max_rounds = 1'000'000, double tol = 1e-12) {
    if (max_rounds < 1)
        throw InputError("max_rounds must be at least 1");
    if (!(tol > 0))
        throw InputError("tolerance must be positive");
    SupportTrajectory trajectory;
    trajectory.steps.push_back(Distribution::uniform(profile.roster));
    for (std::size_t round = 1; round <= max_rounds; ++round) {
        const Distribution& prev = trajectory.steps.back();
        Distribution next = negotiation_step(profile, prev);
        Rational delta = 0;
        for (std::size_t i = 0; i < next.size(); ++i)
            delta += abs(next.at(i) - prev.at(i));
        trajectory.l1_deltas.push_back(to_double(delta));
        trajectory.steps.push_back(std::move(next));
        if (trajectory.l1_deltas.back() < tol) {
            trajectory.converged_at = round;
            break;
        }
    }
    return trajectory;
}

/// A voter's negotiating position: row i spreads 1/(|K|-1) to every option
/// the voter prefers over i and keeps the rest at i.
struct VoterMatrix {
    Ballot ballot;
    TransitionMatrix matrix;
};

inline VoterMatrix voter_matrix(const Ballot& ballot, const CandidateRoster& roster) {
    const std::size_t k = roster.size();
    if (k < 2)
        throw InputError("voter matrix requires at least two candidates");
    if (ballot.relation.candidate_count() != k)
        throw InputError("ballot relation does not match the roster size");
    RationalMatrix p(k, std::vector<Rational>(k, 0));
    const Rational share(1, k - 1);
    for (std::size_t i = 0; i < k; ++i) {
        Rational row = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j != i && ballot.prefers(j, i)) {
                p[i][j] = share;
                row += share;
            }
        }
        p[i][i] = 1 - row;
    }
    return {ballot, TransitionMatrix(roster, std::move(p))};
}

/// Renegotiated community support: the limit, from `initial` (uniform when
/// omitted), of the chain sum h_v * T_v over the voters' negotiating
/// positions, with shares h_v >= 0 summing to 1.
inline Distribution renegotiated_support(const std::vector<std::pair<VoterMatrix, Rational>>& voters,
                                         std::optional<Distribution> initial = std::nullopt) {
    if (voters.empty())
        throw InputError("renegotiated support requires at least one voter");
    const CandidateRoster& roster = voters.front().first.matrix.roster();
    const std::size_t k = roster.size();
    Rational share_sum = 0;
    RationalMatrix p(k, std::vector<Rational>(k, 0));
    for (const auto& [vm, share] : voters) {
        if (share < 0)
            throw InputError("negative voter share");
        if (!(vm.matrix.roster() == roster))
            throw InputError("voter matrices disagree on the roster");
        share_sum += share;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                p[i][j] += share * vm.matrix.at(i, j);
    }
    if (share_sum != 1)
        throw InputError("voter shares must sum to exactly 1");
    const TransitionMatrix t(roster, std::move(p));
    const Distribution start = initial ? *initial : Distribution::uniform(roster);
    return limit_from(t, start);
}

/// Outcome of one seeded deliberation walk.
struct WalkReport {
    std::uint64_t seed = 0;
    std::uint64_t steps = 0;
    std::vector<std::uint64_t> visit_counts; // sums to steps
    std::vector<double> frequencies;         // counts / steps
};

/// Iterated change of decision: start from a uniformly random option; each
/// step proposes a uniformly random alternative, asks a voter drawn
/// proportionally to ballot weight, and moves only if that voter prefers the
/// alternative. The state after each step is counted.
inline WalkReport random_walk(const PreferenceProfile& profile, std::uint64_t steps,
                              std::uint64_t seed) {
    const std::size_t k = profile.roster.size();
    if (k < 2)
        throw InputError("random walk requires at least two candidates");
    if (steps < 1)
        throw InputError("walk needs at least one step");
    detail::require_relations_sized(profile);
    const std::uint64_t voters = profile.total_voters();

    // cumulative ballot weights for the voter draw
    std::vector<std::uint64_t> cumulative;
    cumulative.reserve(profile.ballots.size());
    std::uint64_t acc = 0;
    for (const auto& ballot : profile.ballots) {
        acc += ballot.weight;
        cumulative.push_back(acc);
    }

    Xoshiro256StarStar rng(seed);
    std::size_t state = static_cast<std::size_t>(rng.below(k));
    WalkReport report{seed, steps, std::vector<std::uint64_t>(k, 0), {}};
    for (std::uint64_t step = 0; step < steps; ++step) {
        std::size_t alt = static_cast<std::size_t>(rng.below(k - 1));
        if (alt >= state)
            ++alt;
        if (voters > 0) {
            const std::uint64_t draw = rng.below(voters);
            const std::size_t line = static_cast<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), draw) - cumulative.begin());
            if (profile.ballots[line].prefers(alt, state))
                state = alt;
        }
        ++report.visit_counts[state];
    }
    report.frequencies.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        report.frequencies[i] = static_cast<double>(report.visit_counts[i]) / static_cast<double>(steps);
    return report;
}

inline nlohmann::ordered_json walk_json(const WalkReport& report, const CandidateRoster& roster) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["seed"] = report.seed;
    j["steps"] = report.steps;
    nlohmann::ordered_json counts, freqs;
    for (std::size_t i = 0; i < roster.size(); ++i) {
        counts[roster.name(i)] = report.visit_counts[i];
        freqs[roster.name(i)] = report.frequencies[i];
    }
    j["visit_counts"] = std::move(counts);
    j["frequencies"] = std::move(freqs);
    return j;
}

inline nlohmann::ordered_json trajectory_json(const SupportTrajectory& trajectory) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["rounds"] = trajectory.steps.size() - 1;
    if (trajectory.converged_at)
        j["converged_at"] = *trajectory.converged_at;
    else
        j["converged_at"] = nullptr;
    j["l1_deltas"] = trajectory.l1_deltas;
    nlohmann::ordered_json final_support;
    const Distribution& last = trajectory.steps.back();
    for (std::size_t i = 0; i < last.size(); ++i)
        final_support[last.roster().name(i)] = to_double(last.at(i));
    j["final"] = std::move(final_support);
    return j;
}

} // namespace convote
