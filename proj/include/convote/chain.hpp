#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convote/ballots.hpp"
#include "convote/common.hpp"
#include "convote/graph.hpp"
#include "convote/rational.hpp"

#include "json.hpp"

namespace convote {

/// Row-stochastic matrix of exact rationals; every row must sum to exactly 1.
class TransitionMatrix {
public:
    TransitionMatrix(CandidateRoster roster, RationalMatrix p)
        : roster_(std::move(roster)), p_(std::move(p)) {
        const std::size_t k = roster_.size();
        if (p_.size() != k)
            throw InputError("transition matrix size does not match the roster");
        for (std::size_t i = 0; i < k; ++i) {
            if (p_[i].size() != k)
                throw InputError("transition matrix is not square");
            Rational sum = 0;
            for (const Rational& q : p_[i]) {
                if (q < 0)
                    throw InputError("negative transition probability");
                sum += q;
            }
            if (sum != 1)
                throw InputError("row of '" + roster_.name(i) + "' does not sum to 1");
        }
    }

    static TransitionMatrix identity(CandidateRoster roster) {
        const std::size_t k = roster.size();
        RationalMatrix p(k, std::vector<Rational>(k, 0));
        for (std::size_t i = 0; i < k; ++i)
            p[i][i] = 1;
        return TransitionMatrix(std::move(roster), std::move(p));
    }

    const CandidateRoster& roster() const { return roster_; }
    const RationalMatrix& matrix() const { return p_; }
    const Rational& at(std::size_t i, std::size_t j) const { return p_[i][j]; }
    std::size_t size() const { return roster_.size(); }

    bool operator==(const TransitionMatrix& other) const {
        return roster_ == other.roster_ && p_ == other.p_;
    }

private:
    CandidateRoster roster_;
    RationalMatrix p_;
};

/// Exact probability vector over the roster (entries sum to exactly 1).
class Distribution {
public:
    Distribution(CandidateRoster roster, std::vector<Rational> mass)
        : roster_(std::move(roster)), mass_(std::move(mass)) {
        if (mass_.size() != roster_.size())
            throw InputError("distribution size does not match the roster");
        Rational sum = 0;
        for (const Rational& q : mass_) {
            if (q < 0)
                throw InputError("negative probability mass");
            sum += q;
        }
        if (sum != 1)
            throw InputError("distribution does not sum to 1");
    }

    static Distribution uniform(CandidateRoster roster) {
        const std::size_t k = roster.size();
        if (k == 0)
            throw InputError("cannot build a distribution over zero candidates");
        return Distribution(std::move(roster), std::vector<Rational>(k, Rational(1, k)));
    }

    const CandidateRoster& roster() const { return roster_; }
    const std::vector<Rational>& mass() const { return mass_; }
    const Rational& at(std::size_t i) const { return mass_[i]; }
    std::size_t size() const { return roster_.size(); }

    bool operator==(const Distribution& other) const {
        return roster_ == other.roster_ && mass_ == other.mass_;
    }

private:
    CandidateRoster roster_;
    std::vector<Rational> mass_;
};

/// p[i][j] = weights[i][j] / N for a complemented graph with normalizer N.
inline TransitionMatrix transition_matrix(const PCGraph& graph) {
    if (!graph.normalizer)
        throw InputError("transition matrix requires a complemented graph");
    const std::uint64_t n = *graph.normalizer;
    if (n == 0)
        throw InputError("normalizer is zero (empty electorate)");
    const std::size_t k = graph.roster.size();
    RationalMatrix p(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            p[i][j] = Rational(graph.weights[i][j], n);
    return TransitionMatrix(graph.roster, std::move(p));
}

/// Exact solve of a*x = b by fraction-based Gaussian elimination with partial
/// pivoting on magnitude. Throws on a singular system.
inline std::vector<Rational> solve_linear(RationalMatrix a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (abs(a[r][col]) > abs(a[pivot][col]))
                pivot = r;
        if (a[pivot][col] == 0)
            throw InputError("singular linear system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0)
                continue;
            const Rational factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c)
                a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = b[i] / a[i][i];
    return x;
}

/// Canonical-form view of a chain: closed communication classes with their
/// stationary vectors, the transient states, and the exact probability that a
/// walk from each transient state is absorbed into each class.
struct ChainDecomposition {
    std::vector<std::vector<std::size_t>> closed_classes; // roster indices, each sorted
    std::vector<std::size_t> transient;                   // roster indices, sorted
    std::vector<std::vector<Rational>> class_stationaries; // parallel to closed_classes
    std::vector<std::vector<Rational>> absorption;         // absorption[t][k], rows sum to 1
};

namespace detail {

/// Tarjan SCC over the positive-probability edges, loops ignored.
inline std::vector<std::vector<std::size_t>> strongly_connected_components(const RationalMatrix& p) {
    const std::size_t n = p.size();
    std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w = 0; w < n; ++w) {
            if (w == v || p[v][w] == 0)
                continue;
            if (index[w] == SIZE_MAX) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> comp;
            for (;;) {
                std::size_t w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
                if (w == v)
                    break;
            }
            std::sort(comp.begin(), comp.end());
            components.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] == SIZE_MAX)
            visit(v);
    return components;
}

/// Stationary vector of an irreducible row-stochastic block, indexed like
/// `members`: solve pi*(T-I) = 0 with the normalization sum(pi) = 1.
inline std::vector<Rational> stationary_of_members(const RationalMatrix& p,
                                                   const std::vector<std::size_t>& members) {
    const std::size_t m = members.size();
    RationalMatrix a(m, std::vector<Rational>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            a[i][j] = p[members[j]][members[i]] - (i == j ? 1 : 0); // transpose(T) - I
    std::vector<Rational> b(m, 0);
    for (std::size_t j = 0; j < m; ++j)
        a[m - 1][j] = 1; // replace one equation with the normalization
    b[m - 1] = 1;
    return solve_linear(std::move(a), std::move(b));
}

} // namespace detail

inline ChainDecomposition decompose(const TransitionMatrix& t) {
    const std::size_t n = t.size();
    const RationalMatrix& p = t.matrix();
    auto components = detail::strongly_connected_components(p);

    std::vector<std::size_t> component_of(n);
    for (std::size_t c = 0; c < components.size(); ++c)
        for (std::size_t v : components[c])
            component_of[v] = c;

    ChainDecomposition out;
    for (const auto& comp : components) {
        bool closed = true;
        for (std::size_t v : comp)
            for (std::size_t w = 0; w < n && closed; ++w)
                if (p[v][w] != 0 && component_of[w] != component_of[v])
                    closed = false;
        if (closed)
            out.closed_classes.push_back(comp);
        else
            out.transient.insert(out.transient.end(), comp.begin(), comp.end());
    }
    std::sort(out.closed_classes.begin(), out.closed_classes.end());
    std::sort(out.transient.begin(), out.transient.end());

    for (const auto& members : out.closed_classes)
        out.class_stationaries.push_back(detail::stationary_of_members(p, members));

    // Absorption probabilities: (I - Q) X = B with B[t][k] the one-step mass
    // from transient state t into class k.
    const std::size_t nt = out.transient.size();
    const std::size_t nk = out.closed_classes.size();
    out.absorption.assign(nt, std::vector<Rational>(nk, 0));
    if (nt > 0) {
        RationalMatrix i_minus_q(nt, std::vector<Rational>(nt));
        for (std::size_t a = 0; a < nt; ++a)
            for (std::size_t b = 0; b < nt; ++b)
                i_minus_q[a][b] = (a == b ? 1 : 0) - p[out.transient[a]][out.transient[b]];
        for (std::size_t k = 0; k < nk; ++k) {
            std::vector<Rational> b(nt, 0);
            for (std::size_t a = 0; a < nt; ++a)
                for (std::size_t v : out.closed_classes[k])
                    b[a] += p[out.transient[a]][v];
            auto x = solve_linear(i_minus_q, std::move(b));
            for (std::size_t a = 0; a < nt; ++a)
                out.absorption[a][k] = x[a];
        }
    }
    return out;
}

/// Unique stationary distribution of an irreducible chain; rejects reducible
/// input.
inline Distribution stationary_of_class(const TransitionMatrix& t) {
    auto components = detail::strongly_connected_components(t.matrix());
    if (components.size() != 1)
        throw InputError("matrix is not irreducible");
    std::vector<std::size_t> members(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        members[i] = i;
    return Distribution(t.roster(), detail::stationary_of_members(t.matrix(), members));
}

/// Exact limit of start * T^t for t -> infinity, one class mass at a time.
/// For a periodic recurrent class the same formula yields the Cesaro limit.
inline Distribution limit_from(const TransitionMatrix& t, const Distribution& start) {
    if (!(start.roster() == t.roster()))
        throw InputError("start distribution roster does not match the chain");
    const ChainDecomposition dec = decompose(t);
    std::vector<Rational> limit(t.size(), 0);
    for (std::size_t k = 0; k < dec.closed_classes.size(); ++k) {
        Rational mass = 0;
        for (std::size_t v : dec.closed_classes[k])
            mass += start.at(v);
        for (std::size_t a = 0; a < dec.transient.size(); ++a)
            mass += start.at(dec.transient[a]) * dec.absorption[a][k];
        const auto& pi = dec.class_stationaries[k];
        for (std::size_t i = 0; i < dec.closed_classes[k].size(); ++i)
            limit[dec.closed_classes[k][i]] = mass * pi[i];
    }
    return Distribution(t.roster(), std::move(limit));
}

/// Floating-point power iteration; the independent verifier for limit_from.
struct PowerIterationResult {
    std::vector<double> mass;
    std::size_t steps = 0;
};

inline PowerIterationResult power_iterate(const TransitionMatrix& t, const Distribution& start,
                                          double tol, std::size_t max_steps) {
    if (!(start.roster() == t.roster()))
        throw InputError("start distribution roster does not match the chain");
    if (!(tol > 0))
        throw InputError("tolerance must be positive");
    const std::size_t n = t.size();
    std::vector<std::vector<double>> p(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p[i][j] = to_double(t.at(i, j));
    std::vector<double> cur(n);
    for (std::size_t i = 0; i < n; ++i)
        cur[i] = to_double(start.at(i));

    std::vector<double> next(n);
    for (std::size_t step = 1; step <= max_steps; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (cur[i] == 0.0)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                next[j] += cur[i] * p[i][j];
        }
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            delta += std::abs(next[j] - cur[j]);
        cur.swap(next);
        if (delta < tol)
            return {std::move(cur), step};
    }
    throw InputError("power iteration did not converge in " + std::to_string(max_steps) +
                     " steps (periodic chain or tolerance too tight)");
}

/// JSON triple for one exact probability.
inline nlohmann::ordered_json rational_json(const Rational& q) {
    nlohmann::ordered_json j;
    j["num"] = numerator(q).str();
    j["den"] = denominator(q).str();
    j["decimal"] = to_double(q);
    return j;
}

inline nlohmann::ordered_json distribution_json(const Distribution& d) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < d.size(); ++i)
        j[d.roster().name(i)] = rational_json(d.at(i));
    return j;
}

} // namespace convote
