#include "levyhit/trace_q.hpp"

#include <cmath>
#include <limits>

namespace levyhit {

namespace {

std::vector<std::size_t> non_pivot_indices(std::size_t n, std::size_t i) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < n; ++k)
        if (k != i) idx.push_back(k);
    return idx;
}

double default_slack(const ResolventEvaluator& ev, const PointSet& set) {
    const double probe = set.size() > 1 ? set[1] - set[0] : 1.0;
    return ev.h_tagged(probe).method == HMethod::ClosedForm ? 1e-9 : 1e-5;
}

}  // namespace

std::vector<double> excursion_raw_vector(const ResolventEvaluator& ev,
                                         const PointSet& set, std::size_t i) {
    const std::size_t n = set.size();
    if (n < 2) throw std::invalid_argument("excursion_raw_vector needs n >= 2");
    if (i >= n) throw std::invalid_argument("base index out of range");
    std::vector<double> raw;
    raw.reserve(n - 1);
    for (std::size_t k : non_pivot_indices(n, i))
        raw.push_back(ev.excursion_rate(set[k] - set[i]));
    return raw;
}

ExcursionVector excursion_solved_vector(const ResolventEvaluator& ev,
                                        const PointSet& set, std::size_t i) {
    ExcursionVector out;
    out.base = i;
    out.raw = excursion_raw_vector(ev, set, i);
    Matrix m = pairwise_matrix(ev, set, i);
    try {
        out.solved = solve_checked(m, out.raw).x;
    } catch (const singular_matrix& e) {
        throw singular_matrix(
            std::string("excursion pairwise matrix not invertible: ") + e.what());
    }
    return out;
}

double q_diagonal(const ResolventEvaluator& ev, const PointSet& set,
                  std::size_t i) {
    const auto exc = excursion_solved_vector(ev, set, i);
    double s = 0.0;
    for (double v : exc.solved) s += v;
    return -s;
}

double q_offdiagonal(const ResolventEvaluator& ev, const PointSet& set,
                     std::size_t i, std::size_t j) {
    if (i == j) throw std::invalid_argument("q_offdiagonal needs i != j");
    const double qii = q_diagonal(ev, set, i);
    const auto dist = multi_point(ev, {set.without(i), set[i]});
    const std::size_t pos = j < i ? j : j - 1;
    return -qii * dist.probs[pos];
}

QMatrix build_Q(const ResolventEvaluator& ev, const PointSet& set,
                const QBuildOptions& opts) {
    const std::size_t n = set.size();
    if (n < 2) throw std::invalid_argument("build_Q needs n >= 2");
    const double slack =
        std::isnan(opts.slack) ? default_slack(ev, set) : opts.slack;

    QMatrix out;
    out.q = Matrix(n, n);
    out.labels = set.points();
    out.recurrence = ev.model().recurrence();

    for (std::size_t i = 0; i < n; ++i) {
        const auto exc = excursion_solved_vector(ev, set, i);
        double qii = 0.0;
        for (double v : exc.solved) qii -= v;
        const auto dist = multi_point(ev, {set.without(i), set[i]}, opts.hitting);
        out.q(i, i) = qii;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            out.q(i, j) = -qii * dist.probs[j < i ? j : j - 1];
        }
    }

    out.row_sums.assign(n, 0.0);
    out.min_offdiag = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = std::max(1.0, std::abs(out.q(i, i)));
        if (opts.validate && !(out.q(i, i) < 0.0))
            throw numeric_error("build_Q: diagonal entry " + std::to_string(i) +
                                    " is not negative",
                                out.q(i, i));
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (out.q(i, j) < 0.0) {
                if (opts.validate && out.q(i, j) < -slack * scale)
                    throw numeric_error("build_Q: off-diagonal entry below zero "
                                        "beyond slack",
                                        out.q(i, j));
                out.q(i, j) = 0.0;
            }
            out.min_offdiag = std::min(out.min_offdiag, out.q(i, j));
        }
        double rs = 0.0;
        for (std::size_t j = 0; j < n; ++j) rs += out.q(i, j);
        out.row_sums[i] = rs;
        out.max_abs_row_sum = std::max(out.max_abs_row_sum, std::abs(rs));
        if (opts.validate) {
            if (out.recurrence == Recurrence::Recurrent &&
                std::abs(rs) > slack * scale)
                throw numeric_error("build_Q: recurrent row sum off zero", rs);
            if (out.recurrence == Recurrence::Transient && rs > slack * scale)
                throw numeric_error("build_Q: transient row sum positive", rs);
        }
    }
    return out;
}

namespace {

QMatrix make_q(const PointSet& set, Matrix q, Recurrence rec) {
    QMatrix out;
    out.q = std::move(q);
    out.labels = set.points();
    out.recurrence = rec;
    const std::size_t n = out.q.rows();
    out.row_sums.assign(n, 0.0);
    out.min_offdiag = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double rs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            rs += out.q(i, j);
            if (i != j) out.min_offdiag = std::min(out.min_offdiag, out.q(i, j));
        }
        out.row_sums[i] = rs;
        out.max_abs_row_sum = std::max(out.max_abs_row_sum, std::abs(rs));
    }
    return out;
}

Matrix two_state(double rate) {
    Matrix q(2, 2);
    q(0, 0) = -rate;
    q(0, 1) = rate;
    q(1, 0) = rate;
    q(1, 1) = -rate;
    return q;
}

}  // namespace

QMatrix closed_form_Q(const ProcessModel& model, const PointSet& set) {
    const std::size_t n = set.size();
    if (n != 2 && n != 3)
        throw unsupported_family("closed_form_Q covers n in {2,3} only");
    if (model.recurrence() != Recurrence::Recurrent)
        throw unsupported_family("closed_form_Q covers recurrent models only");

    if (const auto* bm = std::get_if<BrownianMotion>(&model.family())) {
        const double s = bm->sigma2;
        if (n == 2)
            return make_q(set, two_state(s / (2.0 * (set[1] - set[0]))),
                          Recurrence::Recurrent);
        const double r1 = s / (2.0 * (set[1] - set[0]));
        const double r2 = s / (2.0 * (set[2] - set[1]));
        Matrix q(3, 3);
        q(0, 0) = -r1; q(0, 1) = r1;       q(0, 2) = 0.0;
        q(1, 0) = r1;  q(1, 1) = -r1 - r2; q(1, 2) = r2;
        q(2, 0) = 0.0; q(2, 1) = r2;       q(2, 2) = -r2;
        return make_q(set, std::move(q), Recurrence::Recurrent);
    }

    if (const auto* st = std::get_if<StrictlyStable>(&model.family())) {
        const double K = model.K_alpha();
        const double beta = st->beta();
        const double am1 = st->alpha - 1.0;
        if (n == 2)
            return make_q(set,
                          two_state(K / (2.0 * std::pow(set[1] - set[0], am1))),
                          Recurrence::Recurrent);
        // Cramer's rule on the two excursion systems with
        // h(x) = (1 -+ beta) |x|^{alpha-1} / K(alpha):
        // with A, B, C the gap powers and
        // D* = 4AB - (1 - beta^2)(A + B - C)^2, the generator is
        //   diag = -2K (B, C, A) / D*,
        // and each off-diagonal entry is K times a beta-weighted gap
        // combination over D*.  Reduces to the scale-function form at
        // beta = -1 and is symmetric at beta = 0.
        const double A = std::pow(set[1] - set[0], am1);
        const double B = std::pow(set[2] - set[1], am1);
        const double C = std::pow(set[2] - set[0], am1);
        const double w = A + B - C;  // >= 0: concave gap power
        const double D = 4.0 * A * B - (1.0 - beta * beta) * w * w;
        Matrix q(3, 3);
        q(0, 0) = -2.0 * K * B / D;
        q(0, 1) = K * ((1.0 - beta) * B + (1.0 + beta) * (C - A)) / D;
        q(0, 2) = K * (1.0 + beta) * w / D;
        q(1, 0) = K * ((1.0 + beta) * B + (1.0 - beta) * (C - A)) / D;
        q(1, 1) = -2.0 * K * C / D;
        q(1, 2) = K * ((1.0 - beta) * A + (1.0 + beta) * (C - B)) / D;
        q(2, 0) = K * (1.0 - beta) * w / D;
        q(2, 1) = K * ((1.0 + beta) * A + (1.0 - beta) * (C - B)) / D;
        q(2, 2) = -2.0 * K * A / D;
        return make_q(set, std::move(q), Recurrence::Recurrent);
    }

    if (std::holds_alternative<SpectrallyNegativeStable>(model.family())) {
        const auto W = [&model](double x) { return model.scale_function(x); };
        if (n == 2)
            return make_q(set, two_state(1.0 / W(set[1] - set[0])),
                          Recurrence::Recurrent);
        const double w1 = W(set[1] - set[0]);
        const double w2 = W(set[2] - set[1]);
        const double wD = W(set[2] - set[0]);
        Matrix q(3, 3);
        q(0, 0) = -1.0 / w1;
        q(0, 1) = 1.0 / w1;
        q(0, 2) = 0.0;
        q(1, 0) = (wD - w1) / (w1 * w2);
        q(1, 1) = -wD / (w1 * w2);
        q(1, 2) = 1.0 / w2;
        q(2, 0) = (w1 + w2 - wD) / (w1 * w2);
        q(2, 1) = (wD - w2) / (w1 * w2);
        q(2, 2) = -1.0 / w2;
        return make_q(set, std::move(q), Recurrence::Recurrent);
    }

    throw unsupported_family("closed_form_Q: unsupported family");
}

Matrix getoor_Q_at(const ResolventEvaluator& ev, const PointSet& set,
                   double lambda) {
    const std::size_t n = set.size();
    Matrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            u(i, j) = ev.resolvent_density(lambda, set[j] - set[i]);
    LuFactor lu(u);
    if (lu.singular())
        throw singular_matrix("resolvent matrix U^lambda is singular");
    Matrix inv = lu.inverse();
    Matrix q(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q(i, j) = -inv(i, j);
    return q;
}

namespace {

std::vector<double> getoor_powers(const ProcessModel& m) {
    if (const auto* bm = std::get_if<BrownianMotion>(&m.family()))
        return bm->mu == 0.0 ? std::vector<double>{0.5}
                             : std::vector<double>{0.5, 1.0};
    if (const auto* st = std::get_if<StrictlyStable>(&m.family()))
        return {1.0 - 1.0 / st->alpha, 2.0 / st->alpha - 1.0, 0.5};
    if (const auto* sn = std::get_if<SpectrallyNegativeStable>(&m.family()))
        return {1.0 - 1.0 / sn->alpha, 2.0 / sn->alpha - 1.0, 0.5};
    return {0.5, 1.0};
}

}  // namespace

QMatrix getoor_limit_Q(const ResolventEvaluator& ev, const PointSet& set,
                       const std::vector<double>& lambda_sequence) {
    std::vector<double> lambdas = lambda_sequence;
    if (lambdas.empty()) {
        double l = 1.0;
        for (int k = 0; k <= 7; ++k, l *= 0.25) lambdas.push_back(l);
    }
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (!(lambdas[i] < lambdas[i - 1]) || !(lambdas[i] > 0.0))
            throw std::invalid_argument("lambda sequence must decrease to 0");

    const std::size_t n = set.size();
    std::vector<Matrix> qs;
    qs.reserve(lambdas.size());
    for (double l : lambdas) qs.push_back(getoor_Q_at(ev, set, l));

    Matrix best(n, n);
    double best_err = std::numeric_limits<double>::infinity();
    for (double p : getoor_powers(ev.model())) {
        std::vector<double> nodes(lambdas.size());
        for (std::size_t k = 0; k < lambdas.size(); ++k)
            nodes[k] = std::pow(lambdas[k], p);
        Matrix q(n, n);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<double> vals(lambdas.size());
                for (std::size_t k = 0; k < lambdas.size(); ++k)
                    vals[k] = qs[k](i, j);
                auto [v, e] = extrapolate_to_zero(nodes, vals);
                q(i, j) = v;
                err = std::max(err, e);
            }
        }
        if (err < best_err) {
            best_err = err;
            best = q;
        }
    }
    if (!std::isfinite(best_err))
        throw numeric_error("getoor_limit_Q extrapolation failed", best_err);
    return make_q(set, std::move(best), ev.model().recurrence());
}

}  // namespace levyhit
