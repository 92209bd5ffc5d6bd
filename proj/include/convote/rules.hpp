#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convote/ballots.hpp"
#include "convote/chain.hpp"
#include "convote/common.hpp"
#include "convote/graph.hpp"
#include "convote/rational.hpp"

#include "json.hpp"

namespace convote {

/// Per-candidate scores under one rule. Distribution-valued for the chain
/// rules, plain integers (possibly negative) for the tally rules.
struct Scoreboard {
    CandidateRoster roster;
    std::vector<Rational> scores;
    std::string rule;
};

/// Tie-grouped order, best tier first; exact score equality shares a tier.
struct Ranking {
    std::vector<std::vector<std::size_t>> tiers;

    const std::vector<std::size_t>& top() const { return tiers.front(); }
};

inline Ranking rank(const Scoreboard& board) {
    std::vector<std::size_t> order(board.scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return board.scores[a] > board.scores[b];
    });
    Ranking ranking;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || board.scores[order[i]] != board.scores[order[i - 1]])
            ranking.tiers.emplace_back();
        ranking.tiers.back().push_back(order[i]);
    }
    return ranking;
}

/// The complemented-graph Markov chain of a profile. Degenerate electorates
/// (no voters, or a single candidate, with no override) get the identity
/// chain, whose limit from uniform is uniform.
inline TransitionMatrix convergence_chain(const PreferenceProfile& profile,
                                          std::optional<std::uint64_t> normalizer_override = std::nullopt) {
    const std::size_t k = profile.roster.size();
    if (k == 0)
        throw InputError("profile has no candidates");
    const std::uint64_t voters = profile.total_voters();
    if (!normalizer_override && (voters == 0 || k == 1))
        return TransitionMatrix::identity(profile.roster);
    const PCGraph graph = condorcet_graph(pairwise_counts(profile));
    return transition_matrix(complement(graph, voters, normalizer_override));
}

/// Convergence voting: the limit distribution, from a uniform start, of the
/// complemented-graph chain.
inline Scoreboard convergence_scores(const PreferenceProfile& profile,
                                     std::optional<std::uint64_t> normalizer_override = std::nullopt) {
    const TransitionMatrix t = convergence_chain(profile, normalizer_override);
    Distribution limit = limit_from(t, Distribution::uniform(profile.roster));
    return {profile.roster, limit.mass(), "convergence"};
}

namespace detail {

/// Candidates of `relation` that are listed (appear in some pair) and have no
/// superior among them.
inline std::vector<std::size_t> maximal_listed(const PreferenceRelation& relation) {
    std::vector<std::size_t> out;
    for (std::size_t x : relation.listed()) {
        bool beaten = false;
        for (std::size_t y = 0; y < relation.candidate_count() && !beaten; ++y)
            beaten = relation.prefers(y, x);
        if (!beaten)
            out.push_back(x);
    }
    return out;
}

/// True when the listed candidates of `relation` form a total order.
inline bool is_chain(const PreferenceRelation& relation) {
    auto listed = relation.listed();
    for (std::size_t i = 0; i < listed.size(); ++i)
        for (std::size_t j = i + 1; j < listed.size(); ++j)
            if (!relation.prefers(listed[i], listed[j]) && !relation.prefers(listed[j], listed[i]))
                return false;
    return true;
}

} // namespace detail

/// Positional count on chain ballots: the listed candidate at depth d from
/// the top earns (|K|-1-d) points per voter; unlisted candidates earn 0.
inline Scoreboard borda(const PreferenceProfile& profile) {
    const std::size_t k = profile.roster.size();
    detail::require_relations_sized(profile);
    std::vector<Rational> scores(k, 0);
    for (const auto& ballot : profile.ballots) {
        if (!detail::is_chain(ballot.relation))
            throw InputError("borda requires chain ballots (a ballot holds an incomparable pair)");
        for (std::size_t x : ballot.relation.listed()) {
            std::size_t depth = 0;
            for (std::size_t y = 0; y < k; ++y)
                if (ballot.prefers(y, x))
                    ++depth;
            scores[x] += Rational(ballot.weight) * static_cast<std::uint64_t>(k - 1 - depth);
        }
    }
    return {profile.roster, std::move(scores), "borda"};
}

/// Each ballot's weight is split equally over its maximal listed candidates;
/// fully indifferent ballots contribute to no one.
inline Scoreboard plurality(const PreferenceProfile& profile) {
    detail::require_relations_sized(profile);
    std::vector<Rational> scores(profile.roster.size(), 0);
    for (const auto& ballot : profile.ballots) {
        auto tops = detail::maximal_listed(ballot.relation);
        if (tops.empty())
            continue;
        const Rational share = Rational(ballot.weight) / static_cast<std::uint64_t>(tops.size());
        for (std::size_t x : tops)
            scores[x] += share;
    }
    return {profile.roster, std::move(scores), "plurality"};
}

/// The candidate topping strictly more than half of the ballots, if any.
inline std::optional<std::size_t> majority_winner(const PreferenceProfile& profile) {
    const Scoreboard board = plurality(profile);
    const Rational voters = profile.total_voters();
    for (std::size_t x = 0; x < board.scores.size(); ++x)
        if (2 * board.scores[x] > voters)
            return x;
    return std::nullopt;
}

/// The candidate beating every other candidate by strict pairwise majority.
inline std::optional<std::size_t> condorcet_winner(const PairwiseCounts& counts) {
    const std::size_t k = counts.roster.size();
    for (std::size_t x = 0; x < k; ++x) {
        bool wins_all = true;
        for (std::size_t y = 0; y < k && wins_all; ++y)
            if (y != x)
                wins_all = counts.n[y][x] > counts.n[x][y];
        if (wins_all)
            return x;
    }
    return std::nullopt;
}

/// Pairwise wins minus pairwise losses; exact ties contribute nothing.
inline Scoreboard copeland(const PairwiseCounts& counts) {
    const std::size_t k = counts.roster.size();
    std::vector<Rational> scores(k, 0);
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = x + 1; y < k; ++y) {
            // n[y][x] voters prefer x over y
            if (counts.n[y][x] > counts.n[x][y]) {
                scores[x] += 1;
                scores[y] -= 1;
            } else if (counts.n[x][y] > counts.n[y][x]) {
                scores[x] -= 1;
                scores[y] += 1;
            }
        }
    return {counts.roster, std::move(scores), "copeland"};
}

/// Pairwise-ratio chain: transitions depend only on the preference ratio of
/// each compared pair, never on how many voters compared it.
inline TransitionMatrix mc3_chain(const PairwiseCounts& counts) {
    const std::size_t k = counts.roster.size();
    if (k == 1)
        return TransitionMatrix::identity(counts.roster);
    RationalMatrix p(k, std::vector<Rational>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        Rational row = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j)
                continue;
            const std::uint64_t compared =
                detail::checked_add(counts.n[i][j], counts.n[j][i], "pair comparisons");
            if (compared > 0) {
                p[i][j] = Rational(counts.n[i][j]) /
                          (Rational(k - 1) * Rational(compared));
                row += p[i][j];
            }
        }
        p[i][i] = 1 - row;
    }
    return TransitionMatrix(counts.roster, std::move(p));
}

inline Scoreboard mc3_scores(const PairwiseCounts& counts) {
    const TransitionMatrix t = mc3_chain(counts);
    Distribution limit = limit_from(t, Distribution::uniform(counts.roster));
    return {counts.roster, limit.mass(), "mc3"};
}

/// The first-attempt rule: rows normalized by their own out-weight, zero
/// rows made absorbing. Kept as a documented comparison baseline.
inline TransitionMatrix naive_normalized_chain(const PairwiseCounts& counts) {
    const std::size_t k = counts.roster.size();
    RationalMatrix p(k, std::vector<Rational>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t row = 0;
        for (std::size_t j = 0; j < k; ++j)
            row = detail::checked_add(row, counts.n[i][j], "row out-weight");
        if (row == 0)
            p[i][i] = 1;
        else
            for (std::size_t j = 0; j < k; ++j)
                p[i][j] = Rational(counts.n[i][j], row);
    }
    return TransitionMatrix(counts.roster, std::move(p));
}

inline Scoreboard naive_normalized_scores(const PairwiseCounts& counts) {
    const TransitionMatrix t = naive_normalized_chain(counts);
    Distribution limit = limit_from(t, Distribution::uniform(counts.roster));
    return {counts.roster, limit.mass(), "naive"};
}

enum class SeatMethod { largest_remainder, dhondt };

inline std::string to_string(SeatMethod m) {
    return m == SeatMethod::largest_remainder ? "largest-remainder" : "dhondt";
}

struct SeatAllocation {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> seats;
    SeatMethod method = SeatMethod::largest_remainder;
};

/// Turn distribution-valued scores into whole seats. Ties break by roster
/// order in both methods.
inline SeatAllocation allocate_seats(const Scoreboard& board, std::uint64_t total, SeatMethod method) {
    if (total < 1)
        throw InputError("seat total must be at least 1");
    const std::size_t k = board.scores.size();
    Rational sum = 0;
    for (const Rational& s : board.scores) {
        if (s < 0)
            throw InputError("seat allocation requires non-negative scores");
        sum += s;
    }
    if (sum != 1)
        throw InputError("seat allocation requires distribution-valued scores (sum 1)");

    SeatAllocation out{total, std::vector<std::uint64_t>(k, 0), method};
    if (method == SeatMethod::largest_remainder) {
        std::vector<Rational> remainder(k);
        std::uint64_t assigned = 0;
        for (std::size_t i = 0; i < k; ++i) {
            const Rational quota = board.scores[i] * total;
            const BigInt floor_quota = numerator(quota) / denominator(quota);
            out.seats[i] = floor_quota.convert_to<std::uint64_t>();
            remainder[i] = quota - Rational(floor_quota);
            assigned += out.seats[i];
        }
        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return remainder[a] > remainder[b];
        });
        // remaining seats < k because the quotas sum to `total` exactly
        for (std::uint64_t extra = 0; extra < total - assigned; ++extra)
            ++out.seats[order[extra]];
    } else {
        for (std::uint64_t round = 0; round < total; ++round) {
            std::size_t best = 0;
            Rational best_quotient = -1;
            for (std::size_t i = 0; i < k; ++i) {
                const Rational quotient = board.scores[i] / (out.seats[i] + 1);
                if (quotient > best_quotient) {
                    best_quotient = quotient;
                    best = i;
                }
            }
            ++out.seats[best];
        }
    }
    return out;
}

/// One rule's outcome inside a side-by-side comparison. `winners` is empty
/// when the rule names no winner; `error` is set when the rule was not
/// applicable and carries the reason.
struct RuleOutcome {
    std::string rule;
    std::optional<Scoreboard> board;
    std::optional<Ranking> ranking;
    std::optional<std::vector<std::size_t>> winners;
    std::string error;
};

struct RuleComparison {
    CandidateRoster roster;
    std::vector<RuleOutcome> outcomes;
};

/// Run every rule on one profile; a failing rule is reported inline without
/// aborting the others.
inline RuleComparison compare_rules(const PreferenceProfile& profile) {
    RuleComparison out{profile.roster, {}};
    const PairwiseCounts counts = pairwise_counts(profile);

    auto add_board = [&](const std::string& name, auto&& compute) {
        RuleOutcome row;
        row.rule = name;
        try {
            Scoreboard board = compute();
            row.ranking = rank(board);
            row.winners = row.ranking->top();
            row.board = std::move(board);
        } catch (const InputError& e) {
            row.error = e.what();
        }
        out.outcomes.push_back(std::move(row));
    };
    auto add_winner = [&](const std::string& name, std::optional<std::size_t> winner) {
        RuleOutcome row;
        row.rule = name;
        row.winners = winner ? std::vector<std::size_t>{*winner} : std::vector<std::size_t>{};
        out.outcomes.push_back(std::move(row));
    };

    add_board("convergence", [&] { return convergence_scores(profile); });
    add_board("borda", [&] { return borda(profile); });
    add_board("plurality", [&] { return plurality(profile); });
    add_winner("majority", majority_winner(profile));
    add_winner("condorcet", condorcet_winner(counts));
    add_board("copeland", [&] { return copeland(counts); });
    add_board("mc3", [&] { return mc3_scores(counts); });
    add_board("naive", [&] { return naive_normalized_scores(counts); });
    return out;
}

/// Scoreboard document body; callers add the top-level schema_version.
inline nlohmann::ordered_json scoreboard_json(const Scoreboard& board) {
    nlohmann::ordered_json j;
    j["rule"] = board.rule;
    nlohmann::ordered_json scores;
    for (std::size_t i = 0; i < board.scores.size(); ++i)
        scores[board.roster.name(i)] = rational_json(board.scores[i]);
    j["scores"] = std::move(scores);
    const Ranking ranking = rank(board);
    nlohmann::ordered_json tiers = nlohmann::ordered_json::array();
    for (const auto& tier : ranking.tiers) {
        nlohmann::ordered_json names = nlohmann::ordered_json::array();
        for (std::size_t x : tier)
            names.push_back(board.roster.name(x));
        tiers.push_back(std::move(names));
    }
    j["ranking"] = std::move(tiers);
    nlohmann::ordered_json winner = nlohmann::ordered_json::array();
    for (std::size_t x : ranking.top())
        winner.push_back(board.roster.name(x));
    j["winner"] = std::move(winner);
    return j;
}

} // namespace convote
