#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "convote/common.hpp"

namespace convote {

/// Ordered list of distinct candidate identifiers. The declaration order
/// fixes the index used by every matrix and output downstream.
class CandidateRoster {
public:
    CandidateRoster() = default;

    explicit CandidateRoster(std::vector<std::string> names) {
        for (auto& name : names) {
            name = trim(name);
            if (name.empty())
                throw InputError("empty candidate name");
            if (index_.count(name))
                throw InputError("duplicate candidate '" + name + "'");
            index_.emplace(name, names_.size());
            names_.push_back(name);
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    bool operator==(const CandidateRoster& other) const { return names_ == other.names_; }

    static std::string trim(std::string_view s) {
        std::size_t b = s.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos)
            return {};
        std::size_t e = s.find_last_not_of(" \t\r\n");
        return std::string(s.substr(b, e - b + 1));
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// A strict partial order over roster indices, stored densely and always kept
/// transitively closed. Construct through close_ballot / closure_of.
class PreferenceRelation {
public:
    PreferenceRelation() = default;
    explicit PreferenceRelation(std::size_t n) : n_(n), prefers_(n * n, false) {}

    std::size_t candidate_count() const { return n_; }

    bool prefers(std::size_t better, std::size_t worse) const {
        return prefers_[better * n_ + worse];
    }

    bool empty() const {
        return std::find(prefers_.begin(), prefers_.end(), true) == prefers_.end();
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t x = 0; x < n_; ++x)
            for (std::size_t y = 0; y < n_; ++y)
                if (prefers(x, y))
                    out.emplace_back(x, y);
        return out;
    }

    /// Candidates that appear in at least one pair.
    std::vector<std::size_t> listed() const {
        std::vector<std::size_t> out;
        for (std::size_t x = 0; x < n_; ++x) {
            bool seen = false;
            for (std::size_t y = 0; y < n_ && !seen; ++y)
                seen = prefers(x, y) || prefers(y, x);
            if (seen)
                out.push_back(x);
        }
        return out;
    }

    bool operator==(const PreferenceRelation& other) const = default;

    /// Transitive closure of `raw`; rejects anything that closes into a cycle
    /// (which covers both reflexive and symmetric violations).
    static PreferenceRelation closure_of(std::size_t n,
                                         const std::vector<std::pair<std::size_t, std::size_t>>& raw,
                                         const CandidateRoster* roster = nullptr) {
        PreferenceRelation rel(n);
        for (auto [x, y] : raw) {
            if (x >= n || y >= n)
                throw InputError("candidate index out of range");
            rel.prefers_[x * n + y] = true;
        }
        // Floyd-Warshall over booleans
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) {
                if (!rel.prefers(i, k))
                    continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (rel.prefers(k, j))
                        rel.prefers_[i * n + j] = true;
            }
        for (std::size_t x = 0; x < n; ++x)
            if (rel.prefers(x, x))
                throw InputError("preference cycle: " + describe_cycle(n, raw, x, roster));
        return rel;
    }

private:
    static std::string describe_cycle(std::size_t n,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& raw,
                                      std::size_t start, const CandidateRoster* roster) {
        // Recover one explicit cycle through `start` from the raw pairs.
        std::vector<std::vector<std::size_t>> next(n);
        for (auto [x, y] : raw)
            next[x].push_back(y);
        std::vector<std::size_t> path{start};
        std::vector<bool> visited(n, false);
        std::string text;
        auto name = [&](std::size_t i) {
            return roster ? roster->name(i) : std::to_string(i);
        };
        // depth-first search for a path start -> ... -> start
        std::function<bool(std::size_t)> dfs = [&](std::size_t v) -> bool {
            for (std::size_t w : next[v]) {
                if (w == start) {
                    for (std::size_t p : path)
                        text += name(p) + " > ";
                    text += name(start);
                    return true;
                }
                if (!visited[w]) {
                    visited[w] = true;
                    path.push_back(w);
                    if (dfs(w))
                        return true;
                    path.pop_back();
                }
            }
            return false;
        };
        if (!dfs(start))
            text = name(start);
        return text;
    }

    std::size_t n_ = 0;
    std::vector<bool> prefers_;
};

/// close_ballot: validate a set of pairwise assertions as a strict partial
/// order and return its transitive closure. Idempotent.
inline PreferenceRelation close_ballot(const CandidateRoster& roster,
                                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    return PreferenceRelation::closure_of(roster.size(), pairs, &roster);
}

/// One weighted ballot line: `weight` identical voters holding `relation`.
struct Ballot {
    std::uint64_t weight = 0;
    PreferenceRelation relation;

    bool prefers(std::size_t better, std::size_t worse) const {
        return relation.prefers(better, worse);
    }
};

struct PreferenceProfile {
    CandidateRoster roster;
    std::vector<Ballot> ballots;

    /// |V|: sum of ballot weights, rejected if it exceeds 64 bits.
    std::uint64_t total_voters() const {
        std::uint64_t total = 0;
        for (const auto& b : ballots)
            total = detail::checked_add(total, b.weight, "total voter count");
        return total;
    }
};

/// Pairwise tallies: n[x][y] = number of voters who strictly prefer y over x
/// (the edge convention of the Condorcet graph, source = losing option).
struct PairwiseCounts {
    CandidateRoster roster;
    WeightMatrix n;
};

namespace detail {

inline void require_relations_sized(const PreferenceProfile& profile) {
    for (const auto& ballot : profile.ballots)
        if (ballot.relation.candidate_count() != profile.roster.size())
            throw InputError("ballot relation does not match the roster size");
}

} // namespace detail

inline PairwiseCounts pairwise_counts(const PreferenceProfile& profile) {
    const std::size_t k = profile.roster.size();
    detail::require_relations_sized(profile);
    profile.total_voters(); // overflow check
    WeightMatrix n(k, std::vector<std::uint64_t>(k, 0));
    for (const auto& ballot : profile.ballots)
        for (std::size_t better = 0; better < k; ++better)
            for (std::size_t worse = 0; worse < k; ++worse)
                if (ballot.prefers(better, worse))
                    n[worse][better] =
                        detail::checked_add(n[worse][better], ballot.weight, "pairwise count");
    return {profile.roster, std::move(n)};
}

namespace detail {

inline bool valid_name(std::string_view s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-')
            return false;
    return true;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (;;) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.emplace_back(s.substr(pos));
            return out;
        }
        out.emplace_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

inline std::uint64_t parse_weight(const std::string& token, std::size_t line) {
    std::string t = CandidateRoster::trim(token);
    if (t.empty())
        throw ParseError(line, "missing ballot weight");
    if (t[0] == '-')
        throw ParseError(line, "negative weight '" + t + "'");
    if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError(line, "malformed weight '" + t + "'");
    std::uint64_t value = 0;
    for (char c : t) {
        value = checked_mul(value, 10, "ballot weight");
        value = checked_add(value, static_cast<std::uint64_t>(c - '0'), "ballot weight");
    }
    return value;
}

} // namespace detail

/// Parse a ballot file.
///
/// Grammar (UTF-8 text, `#` comments, blank lines ignored):
///   candidates: <name> (, <name>)*
///   <weight> : <chain> (; <chain>)*      chain = <name> ( > <name>)*
/// Chains are written most-preferred-first; "a > b > c" expands to all
/// implied pairs, chains on one line are unioned, and the union is
/// transitively closed.
inline PreferenceProfile parse_profile(std::string_view text) {
    PreferenceProfile profile;
    bool have_roster = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string line(raw);
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = CandidateRoster::trim(line);
        if (line.empty())
            continue;

        if (!have_roster) {
            constexpr std::string_view kHeader = "candidates:";
            if (line.rfind(kHeader, 0) != 0)
                throw ParseError(line_no, "missing 'candidates:' header");
            std::vector<std::string> names;
            for (auto& piece : detail::split(line.substr(kHeader.size()), ',')) {
                std::string name = CandidateRoster::trim(piece);
                if (!detail::valid_name(name))
                    throw ParseError(line_no, "invalid candidate name '" + name + "'");
                names.push_back(std::move(name));
            }
            try {
                profile.roster = CandidateRoster(std::move(names));
            } catch (const InputError& e) {
                throw ParseError(line_no, e.what());
            }
            have_roster = true;
            continue;
        }

        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(line_no, "expected '<weight> : <chain>'");
        std::uint64_t weight = detail::parse_weight(line.substr(0, colon), line_no);

        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& chain_text : detail::split(line.substr(colon + 1), ';')) {
            std::vector<std::size_t> chain;
            for (auto& piece : detail::split(chain_text, '>')) {
                std::string name = CandidateRoster::trim(piece);
                if (name.empty())
                    throw ParseError(line_no, "empty candidate in chain");
                auto idx = profile.roster.find(name);
                if (!idx)
                    throw ParseError(line_no, "unknown candidate '" + name + "'");
                if (std::find(chain.begin(), chain.end(), *idx) != chain.end())
                    throw ParseError(line_no, "duplicate candidate '" + name + "' in one chain");
                chain.push_back(*idx);
            }
            for (std::size_t i = 0; i < chain.size(); ++i)
                for (std::size_t j = i + 1; j < chain.size(); ++j)
                    pairs.emplace_back(chain[i], chain[j]);
        }

        try {
            profile.ballots.push_back({weight, close_ballot(profile.roster, pairs)});
        } catch (const InputError& e) {
            throw ParseError(line_no, e.what());
        }
    }

    if (!have_roster)
        throw ParseError(line_no, "missing 'candidates:' header");
    profile.total_voters(); // overflow check
    return profile;
}

/// Inverse of parse_profile up to representation: ballots are emitted as
/// two-candidate chains, one per pair of the (closed) relation, so reparsing
/// reproduces the same relations and pairwise counts.
inline std::string format_profile(const PreferenceProfile& profile) {
    std::ostringstream out;
    out << "candidates: ";
    for (std::size_t i = 0; i < profile.roster.size(); ++i)
        out << (i ? ", " : "") << profile.roster.name(i);
    out << "\n";
    for (const auto& ballot : profile.ballots) {
        out << ballot.weight << ": ";
        auto pairs = ballot.relation.pairs();
        if (pairs.empty()) {
            out << profile.roster.name(0); // single-name chain: fully indifferent
        } else {
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                if (i)
                    out << "; ";
                out << profile.roster.name(pairs[i].first) << " > "
                    << profile.roster.name(pairs[i].second);
            }
        }
        out << "\n";
    }
    return out.str();
}

} // namespace convote
