#include "levyhit/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levyhit/rng.hpp"

namespace levyhit {

CtmcSpec::CtmcSpec(Matrix gen, std::vector<std::string> names)
    : generator(std::move(gen)), labels(std::move(names)) {
    const std::size_t m = generator.rows();
    if (m == 0 || generator.cols() != m)
        throw std::invalid_argument("generator must be square and nonempty");
    if (!labels.empty() && labels.size() != m)
        throw std::invalid_argument("label count mismatch");
    for (std::size_t i = 0; i < m; ++i) {
        double rs = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && generator(i, j) < 0.0)
                throw std::invalid_argument("negative off-diagonal rate");
            rs += generator(i, j);
        }
        if (rs > 1e-9)
            throw std::invalid_argument("generator row sum must be <= 0");
    }
}

CtmcHitResult ctmc_hit_probs(const CtmcSpec& chain, std::size_t start,
                             const std::vector<std::size_t>& targets) {
    const std::size_t m = chain.states();
    if (targets.empty()) throw std::invalid_argument("targets must be nonempty");
    if (start >= m) throw std::invalid_argument("start state out of range");
    std::vector<bool> is_target(m, false);
    for (std::size_t t : targets) {
        if (t >= m) throw std::invalid_argument("target state out of range");
        is_target[t] = true;
    }

    CtmcHitResult out;
    out.probs.assign(targets.size(), 0.0);
    auto at = std::find(targets.begin(), targets.end(), start);
    if (at != targets.end()) {
        out.probs[static_cast<std::size_t>(at - targets.begin())] = 1.0;
        out.unreachable = 0.0;
        return out;
    }

    std::vector<std::size_t> interior;
    for (std::size_t s = 0; s < m; ++s)
        if (!is_target[s]) interior.push_back(s);
    const std::size_t k = interior.size();

    // First-step equations: sum_j q_{s,j} u(j) = 0 on interior states,
    // u = indicator on targets.
    Matrix a(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c)
            a(r, c) = chain.generator(interior[r], interior[c]);
    // Tiny diagonal shift keeps reducible chains solvable; unreachable
    // targets then simply collect ~0 mass, reported via `unreachable`.
    const double shift = 1e-13 * std::max(1.0, a.norm_inf());
    for (std::size_t r = 0; r < k; ++r) a(r, r) -= shift;
    LuFactor lu(a);

    const std::size_t start_pos = static_cast<std::size_t>(
        std::find(interior.begin(), interior.end(), start) - interior.begin());

    double total = 0.0;
    std::vector<double> rhs(k);
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        for (std::size_t r = 0; r < k; ++r)
            rhs[r] = -chain.generator(interior[r], targets[ti]);
        const auto u = lu.solve(rhs);
        out.probs[ti] = u[start_pos];
        total += u[start_pos];
    }
    out.unreachable = std::max(0.0, 1.0 - total);
    return out;
}

OracleReport validate_theorem_A1(const CtmcSpec& chain, std::size_t start,
                                 const std::vector<std::size_t>& targets,
                                 double tol) {
    const std::size_t n = targets.size();
    if (n < 2) throw std::invalid_argument("need at least two targets");

    const auto direct = ctmc_hit_probs(chain, start, targets);

    // pairwise(l, k) = P_{a_l}(T_{a_k} < T_{a_n})
    auto pair_prob = [&](std::size_t from_state, std::size_t k) {
        return ctmc_hit_probs(chain, from_state, {targets[k], targets[n - 1]})
            .probs[0];
    };

    Matrix m(n - 1, n - 1);
    std::vector<double> v(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        for (std::size_t l = 0; l + 1 < n; ++l)
            m(k, l) = (k == l) ? 1.0 : pair_prob(targets[l], k);
        v[k] = pair_prob(start, k);
    }
    const auto sol = solve_checked(m, v);

    OracleReport rep;
    for (std::size_t k = 0; k + 1 < n; ++k)
        rep.max_discrepancy =
            std::max(rep.max_discrepancy, std::abs(sol.x[k] - direct.probs[k]));
    rep.pass = rep.max_discrepancy < tol;
    if (!rep.pass)
        rep.detail = "matrix-equation solution deviates from direct hit "
                     "probabilities by " +
                     std::to_string(rep.max_discrepancy);
    return rep;
}

OracleReport validate_Q_roundtrip(const CtmcSpec& chain, double tol) {
    const std::size_t m = chain.states();
    if (m < 2) throw std::invalid_argument("need at least two states");
    const Matrix& q = chain.generator;

    Matrix rebuilt(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> others;
        for (std::size_t k = 0; k < m; ++k)
            if (k != i) others.push_back(k);
        const std::size_t n1 = others.size();

        // P_s(T_k < T_i) for any state s
        auto hit_before_return = [&](std::size_t s, std::size_t k) -> double {
            if (s == k) return 1.0;
            if (s == i) return 0.0;
            return ctmc_hit_probs(chain, s, {k, i}).probs[0];
        };

        // raw excursion-rate analogue: jumps out of i weighted by the
        // probability of reaching k before coming back to i.
        std::vector<double> raw(n1, 0.0);
        for (std::size_t ki = 0; ki < n1; ++ki)
            for (std::size_t j = 0; j < m; ++j)
                if (j != i) raw[ki] += q(i, j) * hit_before_return(j, others[ki]);

        Matrix pw(n1, n1);
        for (std::size_t r = 0; r < n1; ++r)
            for (std::size_t c = 0; c < n1; ++c)
                pw(r, c) = (r == c) ? 1.0 : hit_before_return(others[c], others[r]);
        const auto solved = solve_checked(pw, raw).x;

        double qii = 0.0;
        for (double s : solved) qii -= s;
        rebuilt(i, i) = qii;

        const auto dist = ctmc_hit_probs(chain, i, others);
        for (std::size_t ki = 0; ki < n1; ++ki)
            rebuilt(i, others[ki]) = -qii * dist.probs[ki];
    }

    OracleReport rep;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            rep.max_discrepancy =
                std::max(rep.max_discrepancy, std::abs(rebuilt(i, j) - q(i, j)));
    rep.pass = rep.max_discrepancy < tol;
    if (!rep.pass)
        rep.detail = "reassembled generator deviates by " +
                     std::to_string(rep.max_discrepancy);
    return rep;
}

CtmcSpec random_ctmc(std::size_t m, std::uint64_t seed, double leak_rate) {
    PathRng rng(seed, 0);
    Matrix q(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        double rs = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            q(i, j) = 0.05 + rng.uniform();  // dense, hence irreducible
            rs += q(i, j);
        }
        q(i, i) = -rs - (leak_rate > 0.0 ? leak_rate * rng.uniform() : 0.0);
    }
    return CtmcSpec(std::move(q));
}

}  // namespace levyhit
