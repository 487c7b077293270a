#ifndef LEVYHIT_CTMC_HPP
#define LEVYHIT_CTMC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "levyhit/linalg.hpp"

namespace levyhit {

/// Finite-state CTMC generator: off-diagonal rates >= 0, row sums <= 0
/// (a strict deficit is killing).
struct CtmcSpec {
    Matrix generator;
    std::vector<std::string> labels;  // optional, sized 0 or m

    explicit CtmcSpec(Matrix gen, std::vector<std::string> names = {});
    std::size_t states() const { return generator.rows(); }
};

struct CtmcHitResult {
    std::vector<double> probs;  // one per target, in target order
    double unreachable;         // 1 - sum (escape or killing mass)
};

/// Exact first-target distribution P_start(first target hit = t) via the
/// first-step linear system on the non-target states.
CtmcHitResult ctmc_hit_probs(const CtmcSpec& chain, std::size_t start,
                             const std::vector<std::size_t>& targets);

struct OracleReport {
    double max_discrepancy = 0.0;
    bool pass = true;
    std::string detail;
};

/// Checks the multi-point linear system against the directly computed
/// hit distribution on one chain: pairwise two-target probabilities are
/// fed through the (n-1)x(n-1) system and compared entrywise.
OracleReport validate_theorem_A1(const CtmcSpec& chain, std::size_t start,
                                 const std::vector<std::size_t>& targets,
                                 double tol = 1e-10);

/// Treats the chain itself as a trace process: reassembles its generator
/// from pairwise hitting probabilities and excursion-rate analogues
/// (jump rates weighted by return-avoiding hit probabilities) and
/// compares with the original entrywise.  Requires a conservative chain.
OracleReport validate_Q_roundtrip(const CtmcSpec& chain, double tol = 1e-9);

/// Seeded random dense conservative generator on m states; with
/// leak_rate > 0 every state additionally kills at a rate drawn from
/// [0, leak_rate].
CtmcSpec random_ctmc(std::size_t m, std::uint64_t seed, double leak_rate = 0.0);

}  // namespace levyhit

#endif  // LEVYHIT_CTMC_HPP
