#include "depscreen/local_regression.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "depscreen/errors.hpp"

namespace depscreen {

namespace {

const double kSqrt2 = std::sqrt(2.0);

Eigen::MatrixXd rows_subset(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) = m.row(rows[static_cast<size_t>(i)]);
    return out;
}

// Symmetrized rank-one local measure for the covariance variant:
// entries ((a_i + a_j)/2) with a_i = (v_i - mean)/sqrt(n-1).
Eigen::MatrixXd covariance_local_matrix(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size();
    const Eigen::VectorXd a = (v.array() - v.mean()) / std::sqrt(static_cast<double>(n - 1));
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = 0.5 * (a(i) + a(j));
    }
    return m;
}

Eigen::MatrixXd local_matrix(const DataColumn& col, LocalMeasureKind kind,
                             const BandwidthVector* bw) {
    switch (kind) {
        case LocalMeasureKind::HsicCenteredKernel: {
            const BandwidthVector b = bw != nullptr ? *bw : empirical_bandwidth(col);
            return double_center_matrix(gaussian_gram(col, b).entries());
        }
        case LocalMeasureKind::DcovCenteredDistance:
            return double_center_matrix(distance_gram(col).entries());
        case LocalMeasureKind::Covariance:
            if (col.q() != 1) {
                throw UnsupportedMeasure("covariance local measure requires scalar columns");
            }
            return covariance_local_matrix(col.values().col(0));
    }
    throw Error("unreachable");
}

struct NormalEquations {
    Eigen::MatrixXd m;   // X^T X
    Eigen::VectorXd c;   // X^T y
    double yty = 0.0;
};

NormalEquations normal_equations(const LocalDesign& design) {
    const int d = design.d;
    NormalEquations eq;
    eq.m.resize(d, d);
    eq.c.resize(d);
    eq.yty = design.response.squaredNorm();
    for (int k = 0; k < d; ++k) {
        eq.c(k) = design.predictors[static_cast<size_t>(k)].dot(design.response);
        for (int l = k; l < d; ++l) {
            const double v =
                design.predictors[static_cast<size_t>(k)].dot(design.predictors[static_cast<size_t>(l)]);
            eq.m(k, l) = v;
            eq.m(l, k) = v;
        }
    }
    return eq;
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
    return m.ldlt().solve(rhs);
}

// Active-set NNLS on normal equations; returns beta >= 0.
Eigen::VectorXd nnls_normal(const Eigen::MatrixXd& m, const Eigen::VectorXd& c, int budget) {
    const int d = static_cast<int>(c.size());
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
    std::vector<int> passive;
    const double tol = 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff());

    for (int outer = 0; outer < budget; ++outer) {
        const Eigen::VectorXd w = c - m * beta;
        int best = -1;
        double best_w = tol;
        for (int k = 0; k < d; ++k) {
            if (std::find(passive.begin(), passive.end(), k) != passive.end()) continue;
            if (w(k) > best_w) {
                best_w = w(k);
                best = k;
            }
        }
        if (best < 0) return beta;
        passive.push_back(best);
        std::sort(passive.begin(), passive.end());

        for (int inner = 0; inner <= budget; ++inner) {
            const int p = static_cast<int>(passive.size());
            Eigen::MatrixXd mp(p, p);
            Eigen::VectorXd cp(p);
            for (int a = 0; a < p; ++a) {
                cp(a) = c(passive[static_cast<size_t>(a)]);
                for (int b = 0; b < p; ++b) {
                    mp(a, b) = m(passive[static_cast<size_t>(a)], passive[static_cast<size_t>(b)]);
                }
            }
            const Eigen::VectorXd z = solve_spd(mp, cp);
            if ((z.array() > 0.0).all()) {
                beta.setZero();
                for (int a = 0; a < p; ++a) beta(passive[static_cast<size_t>(a)]) = z(a);
                break;
            }
            // Step to the boundary and drop the zeroed coordinates.
            double step = 1.0;
            for (int a = 0; a < p; ++a) {
                if (z(a) <= 0.0) {
                    const double bk = beta(passive[static_cast<size_t>(a)]);
                    const double denom = bk - z(a);
                    if (denom > 0.0) step = std::min(step, bk / denom);
                }
            }
            std::vector<int> keep;
            Eigen::VectorXd nb = Eigen::VectorXd::Zero(d);
            for (int a = 0; a < p; ++a) {
                const int k = passive[static_cast<size_t>(a)];
                const double v = beta(k) + step * (z(a) - beta(k));
                if (v > 1e-14) {
                    nb(k) = v;
                    keep.push_back(k);
                }
            }
            beta = nb;
            passive = keep;
            if (inner == budget) throw NonConvergence("nnls inner loop exceeded its budget");
        }
    }
    throw NonConvergence("nnls exceeded its iteration budget");
}

struct CandidateEvent {
    double lambda;
    bool drop;
    int index;
};

}  // namespace

Eigen::VectorXd vectorize_symmetric(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    Eigen::VectorXd v(n * (n + 1) / 2);
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        v(pos++) = m(i, i);
        for (Eigen::Index j = i + 1; j < n; ++j) v(pos++) = kSqrt2 * m(i, j);
    }
    return v;
}

LocalDesign build_design(const Dataset& dataset, LocalMeasureKind kind) {
    LocalDesign design;
    design.kind = kind;
    design.n = static_cast<int>(dataset.n());
    design.d = dataset.d();
    design.response = vectorize_symmetric(local_matrix(dataset.output, kind, nullptr));
    design.predictors.reserve(static_cast<size_t>(design.d));
    for (const auto& col : dataset.inputs) {
        design.predictors.push_back(vectorize_symmetric(local_matrix(col, kind, nullptr)));
    }
    return design;
}

FitResult nnls_fit(const LocalDesign& design) {
    if (design.d < 1) throw Error("nnls_fit: empty design");
    const NormalEquations eq = normal_equations(design);
    const Eigen::VectorXd beta = nnls_normal(eq.m, eq.c, 10 * std::max(design.d, 2));
    FitResult fit;
    fit.beta = beta;
    const double n2 = static_cast<double>(design.n) * static_cast<double>(design.n);
    fit.residual_norm2 =
        std::max(0.0, eq.yty - 2.0 * eq.c.dot(beta) + beta.dot(eq.m * beta)) / n2;
    for (int k = 0; k < design.d; ++k) {
        if (beta(k) > 0.0) fit.active.push_back(k);
    }
    return fit;
}

double objective_expand(const Eigen::VectorXd& beta, const Dataset& dataset,
                        LocalMeasureKind kind) {
    const int d = dataset.d();
    if (beta.size() != d) throw DimensionMismatch("beta length must equal the input count");

    auto delta = [&](const DataColumn& a, const DataColumn& b) {
        switch (kind) {
            case LocalMeasureKind::HsicCenteredKernel:
                return hsic(a, b, empirical_bandwidth(a), empirical_bandwidth(b)).value;
            case LocalMeasureKind::DcovCenteredDistance:
                return dcov2(a, b).value;
            case LocalMeasureKind::Covariance: {
                const Eigen::VectorXd av = a.values().col(0);
                const Eigen::VectorXd bv = b.values().col(0);
                const double n = static_cast<double>(av.size());
                const double s = ((av.array() - av.mean()) * (bv.array() - bv.mean())).sum();
                return s / (2.0 * n * (n - 1.0));
            }
        }
        throw Error("unreachable");
    };

    double eta = delta(dataset.output, dataset.output);
    for (int k = 0; k < d; ++k) {
        eta -= 2.0 * beta(k) * delta(dataset.inputs[static_cast<size_t>(k)], dataset.output);
    }
    for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
            eta += beta(k) * beta(l) *
                   delta(dataset.inputs[static_cast<size_t>(k)], dataset.inputs[static_cast<size_t>(l)]);
        }
    }
    return eta;
}

Eigen::VectorXd LarsPath::at(double lambda) const {
    if (knots.empty()) throw Error("empty path");
    if (lambda >= knots.front()) return betas.front();
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
        if (lambda >= knots[i + 1]) {
            const double l0 = knots[i];
            const double l1 = knots[i + 1];
            const double t = l0 == l1 ? 1.0 : (l0 - lambda) / (l0 - l1);
            return betas[i] * (1.0 - t) + betas[i + 1] * t;
        }
    }
    return betas.back();
}

LarsPath lars_positive_path(const LocalDesign& design) {
    const int d = design.d;
    if (d < 1) throw Error("lars_positive_path: empty design");
    for (int k = 0; k < d; ++k) {
        if (design.predictors[static_cast<size_t>(k)].squaredNorm() <= 0.0) {
            throw DegeneratePredictor("predictor " + std::to_string(k) + " has zero norm");
        }
    }
    const NormalEquations eq = normal_equations(design);
    const Eigen::MatrixXd& m = eq.m;
    const Eigen::VectorXd& c = eq.c;

    LarsPath path;
    double lambda = std::max(c.maxCoeff(), 0.0);
    path.knots.push_back(lambda);
    path.betas.push_back(Eigen::VectorXd::Zero(d));
    if (lambda <= 0.0) return path;

    std::vector<int> active;
    {
        // Lowest index wins ties at entry.
        int arg = 0;
        double best = c(0);
        for (int k = 1; k < d; ++k) {
            if (c(k) > best) {
                best = c(k);
                arg = k;
            }
        }
        active.push_back(arg);
    }

    const int max_events = 20 * d + 100;
    const double scale = std::max(lambda, 1e-300);
    for (int event = 0; event < max_events && lambda > 1e-14 * scale; ++event) {
        const int p = static_cast<int>(active.size());
        Eigen::MatrixXd ma(p, p);
        Eigen::VectorXd ca(p);
        for (int a = 0; a < p; ++a) {
            ca(a) = c(active[static_cast<size_t>(a)]);
            for (int b = 0; b < p; ++b) {
                ma(a, b) = m(active[static_cast<size_t>(a)], active[static_cast<size_t>(b)]);
            }
        }
        const Eigen::VectorXd b_ols = solve_spd(ma, ca);
        const Eigen::VectorXd dir = solve_spd(ma, Eigen::VectorXd::Ones(p));
        if (!b_ols.allFinite() || !dir.allFinite()) {
            throw DegeneratePredictor("singular active set in the lasso path");
        }

        std::vector<CandidateEvent> events;
        for (int j = 0; j < d; ++j) {
            if (std::find(active.begin(), active.end(), j) != active.end()) continue;
            double r0 = c(j);
            double aj = 0.0;
            for (int a = 0; a < p; ++a) {
                r0 -= m(j, active[static_cast<size_t>(a)]) * b_ols(a);
                aj += m(j, active[static_cast<size_t>(a)]) * dir(a);
            }
            const double den = 1.0 - aj;
            if (std::fabs(den) < 1e-12) continue;   // parallel predictor, never crosses
            const double lj = r0 / den;
            if (lj > 1e-14 * scale && lj < lambda * (1.0 - 1e-12)) {
                events.push_back({lj, false, j});
            }
        }
        for (int a = 0; a < p; ++a) {
            if (std::fabs(dir(a)) < 1e-300) continue;
            const double lk = b_ols(a) / dir(a);
            if (lk > 1e-14 * scale && lk < lambda * (1.0 - 1e-12)) {
                events.push_back({lk, true, active[static_cast<size_t>(a)]});
            }
        }

        if (events.empty()) {
            Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
            for (int a = 0; a < p; ++a) {
                beta(active[static_cast<size_t>(a)]) = std::max(b_ols(a), 0.0);
            }
            path.knots.push_back(0.0);
            path.betas.push_back(std::move(beta));
            return path;
        }

        double next = 0.0;
        for (const auto& e : events) next = std::max(next, e.lambda);
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
        for (int a = 0; a < p; ++a) {
            beta(active[static_cast<size_t>(a)]) = std::max(b_ols(a) - next * dir(a), 0.0);
        }
        path.knots.push_back(next);
        path.betas.push_back(beta);

        // One event per knot: drops first, then the lowest entering index.
        const CandidateEvent* chosen = nullptr;
        for (const auto& e : events) {
            if (e.lambda < next * (1.0 - 1e-10)) continue;
            if (chosen == nullptr || (e.drop && !chosen->drop) ||
                (e.drop == chosen->drop && e.index < chosen->index)) {
                chosen = &e;
            }
        }
        if (chosen->drop) {
            active.erase(std::remove(active.begin(), active.end(), chosen->index), active.end());
            if (active.empty()) return path;
        } else {
            active.push_back(chosen->index);
            std::sort(active.begin(), active.end());
        }
        lambda = next;
    }
    if (lambda > 1e-10 * scale) {
        throw NonConvergence("lasso path exceeded its event budget");
    }
    return path;
}

namespace {

Dataset dataset_rows(const Dataset& ds, const std::vector<Eigen::Index>& rows) {
    std::vector<DataColumn> inputs;
    inputs.reserve(ds.inputs.size());
    for (const auto& col : ds.inputs) inputs.emplace_back(rows_subset(col.values(), rows));
    return Dataset(std::move(inputs), DataColumn(rows_subset(ds.output.values(), rows)));
}

// Design for held-out rows: kernel bandwidths come from the training fold.
LocalDesign design_with_bandwidths(const Dataset& ds, LocalMeasureKind kind,
                                   const std::vector<BandwidthVector>& bw_inputs,
                                   const BandwidthVector& bw_output) {
    LocalDesign design;
    design.kind = kind;
    design.n = static_cast<int>(ds.n());
    design.d = ds.d();
    const bool kernel = kind == LocalMeasureKind::HsicCenteredKernel;
    design.response =
        vectorize_symmetric(local_matrix(ds.output, kind, kernel ? &bw_output : nullptr));
    for (int k = 0; k < design.d; ++k) {
        design.predictors.push_back(vectorize_symmetric(local_matrix(
            ds.inputs[static_cast<size_t>(k)], kind,
            kernel ? &bw_inputs[static_cast<size_t>(k)] : nullptr)));
    }
    return design;
}

}  // namespace

CvSelection cv_select(const Dataset& dataset, LocalMeasureKind kind, int folds,
                      CvMode mode, const CvParams& params) {
    const Eigen::Index n = dataset.n();
    if (folds < 2) throw Error("cv_select needs at least 2 folds");
    if (n < 2 * folds) throw InsufficientSample("cv_select needs n >= 2 * folds");

    const LocalDesign full = build_design(dataset, kind);
    double lambda_max = 0.0;
    for (const auto& p : full.predictors) lambda_max = std::max(lambda_max, p.dot(full.response));

    CvSelection sel;
    sel.mode = mode;
    const int L = params.grid_size;
    sel.lambda_grid.resize(static_cast<size_t>(L));
    if (lambda_max <= 0.0) {
        // No predictor correlates positively: the path is identically zero.
        std::fill(sel.lambda_grid.begin(), sel.lambda_grid.end(), 0.0);
        sel.mean_error.assign(static_cast<size_t>(L), 0.0);
        sel.sd_error.assign(static_cast<size_t>(L), 0.0);
        sel.lambda_hat = 0.0;
        return sel;
    }
    const double log_lo = std::log(lambda_max * params.grid_span);
    const double log_hi = std::log(lambda_max);
    for (int l = 0; l < L; ++l) {
        const double t = L == 1 ? 1.0 : static_cast<double>(l) / static_cast<double>(L - 1);
        sel.lambda_grid[static_cast<size_t>(l)] = std::exp(log_lo + t * (log_hi - log_lo));
    }

    // Deterministic shuffled fold assignment.
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng shuffle_rng(params.shuffle_seed);
    for (Eigen::Index i = n - 1; i > 0; --i) {
        std::swap(order[static_cast<size_t>(i)],
                  order[static_cast<size_t>(shuffle_rng.below(static_cast<std::uint64_t>(i + 1)))]);
    }

    Eigen::MatrixXd errs(folds, L);
    for (int f = 0; f < folds; ++f) {
        std::vector<Eigen::Index> train, test;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (static_cast<int>(i % folds) == f) {
                test.push_back(order[static_cast<size_t>(i)]);
            } else {
                train.push_back(order[static_cast<size_t>(i)]);
            }
        }
        const Dataset train_ds = dataset_rows(dataset, train);
        const Dataset test_ds = dataset_rows(dataset, test);
        const LocalDesign train_design = build_design(train_ds, kind);
        const LarsPath path = lars_positive_path(train_design);

        std::vector<BandwidthVector> bw_inputs;
        BandwidthVector bw_output{Eigen::VectorXd()};
        if (kind == LocalMeasureKind::HsicCenteredKernel) {
            for (const auto& col : train_ds.inputs) bw_inputs.push_back(empirical_bandwidth(col));
            bw_output = empirical_bandwidth(train_ds.output);
        }
        const LocalDesign test_design =
            design_with_bandwidths(test_ds, kind, bw_inputs, bw_output);

        for (int l = 0; l < L; ++l) {
            const Eigen::VectorXd beta = path.at(sel.lambda_grid[static_cast<size_t>(l)]);
            Eigen::VectorXd resid = test_design.response;
            for (int k = 0; k < test_design.d; ++k) {
                if (beta(k) != 0.0) resid -= beta(k) * test_design.predictors[static_cast<size_t>(k)];
            }
            errs(f, l) = resid.squaredNorm();
        }
    }

    sel.mean_error.resize(static_cast<size_t>(L));
    sel.sd_error.resize(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l) {
        const double mu = errs.col(l).mean();
        const double var = (errs.col(l).array() - mu).square().sum() / (folds - 1.0);
        sel.mean_error[static_cast<size_t>(l)] = mu;
        sel.sd_error[static_cast<size_t>(l)] = std::sqrt(var);
    }

    int l_std = 0;
    for (int l = 0; l < L; ++l) {
        if (sel.mean_error[static_cast<size_t>(l)] <= sel.mean_error[static_cast<size_t>(l_std)]) {
            l_std = l;  // ties resolve to the larger lambda
        }
    }
    int l_hat = l_std;
    if (mode == CvMode::Modified) {
        const double band = sel.mean_error[static_cast<size_t>(l_std)] +
                            params.sigma_weight * sel.sd_error[static_cast<size_t>(l_std)];
        for (int l = L - 1; l >= 0; --l) {
            if (sel.mean_error[static_cast<size_t>(l)] <= band) {
                l_hat = l;
                break;
            }
        }
        l_hat = std::max(l_hat, l_std);
    }
    sel.lambda_hat = sel.lambda_grid[static_cast<size_t>(l_hat)];
    return sel;
}

namespace {

// Shared machinery for the coefficient bootstrap: the design's normal
// equations plus what is needed to rebuild column k under resampling.
struct CoefBootstrapContext {
    LocalDesign design;
    NormalEquations eq;
    Eigen::VectorXd beta_hat;
    std::vector<Eigen::MatrixXd> raw_grams;  // kernel/distance Grams per input
    int budget = 0;
};

CoefBootstrapContext make_context(const Dataset& dataset, LocalMeasureKind kind) {
    CoefBootstrapContext ctx;
    ctx.design = build_design(dataset, kind);
    ctx.eq = normal_equations(ctx.design);
    ctx.budget = 10 * std::max(ctx.design.d, 2);
    ctx.beta_hat = nnls_normal(ctx.eq.m, ctx.eq.c, ctx.budget);
    if (kind != LocalMeasureKind::Covariance) {
        ctx.raw_grams.reserve(dataset.inputs.size());
        for (const auto& col : dataset.inputs) {
            ctx.raw_grams.push_back(kind == LocalMeasureKind::HsicCenteredKernel
                                        ? gaussian_gram(col, empirical_bandwidth(col)).entries()
                                        : distance_gram(col).entries());
        }
    }
    return ctx;
}

// Predictor vector for column k after resampling its rows by pi.
// Kernel and distance Grams are re-indexed (bandwidths stay fixed);
// the covariance variant is rebuilt from the resampled values.
Eigen::VectorXd resampled_predictor(const CoefBootstrapContext& ctx, const Dataset& dataset,
                                    LocalMeasureKind kind, int k,
                                    const std::vector<Eigen::Index>& pi) {
    const Eigen::Index n = dataset.n();
    if (kind == LocalMeasureKind::Covariance) {
        const Eigen::VectorXd& v = dataset.inputs[static_cast<size_t>(k)].values().col(0);
        Eigen::VectorXd rv(n);
        for (Eigen::Index i = 0; i < n; ++i) rv(i) = v(pi[static_cast<size_t>(i)]);
        return vectorize_symmetric(covariance_local_matrix(rv));
    }
    const Eigen::MatrixXd& g = ctx.raw_grams[static_cast<size_t>(k)];
    Eigen::MatrixXd p(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index pi_i = pi[static_cast<size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) p(i, j) = g(pi_i, pi[static_cast<size_t>(j)]);
    }
    return vectorize_symmetric(double_center_matrix(p));
}

TestOutcome coef_test_one(const CoefBootstrapContext& ctx, const Dataset& dataset,
                          LocalMeasureKind kind, int k,
                          const std::vector<std::vector<Eigen::Index>>& resamples,
                          double alpha) {
    const int d = ctx.design.d;
    Eigen::MatrixXd m = ctx.eq.m;
    Eigen::VectorXd c = ctx.eq.c;
    int exceed = 0;
    for (const auto& pi : resamples) {
        const Eigen::VectorXd vk = resampled_predictor(ctx, dataset, kind, k, pi);
        for (int l = 0; l < d; ++l) {
            const double v = l == k ? vk.squaredNorm()
                                    : vk.dot(ctx.design.predictors[static_cast<size_t>(l)]);
            m(k, l) = v;
            m(l, k) = v;
        }
        c(k) = vk.dot(ctx.design.response);
        const Eigen::VectorXd beta_b = nnls_normal(m, c, ctx.budget);
        if (beta_b(k) > ctx.beta_hat(k)) ++exceed;
    }
    TestOutcome out;
    out.method = Method::CoefficientBootstrap;
    out.alpha = alpha;
    out.statistic = ctx.beta_hat(k);
    out.p_value = static_cast<double>(exceed) / static_cast<double>(resamples.size());
    out.reject = out.p_value < alpha;
    return out;
}

std::vector<std::vector<Eigen::Index>> column_resamples(Eigen::Index n, int B, Rng& rng) {
    std::vector<std::vector<Eigen::Index>> idx(static_cast<size_t>(B));
    for (auto& row : idx) {
        row.resize(static_cast<size_t>(n));
        for (auto& v : row) v = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    return idx;
}

}  // namespace

TestOutcome bootstrap_coefficient_test(const Dataset& dataset, int k,
                                       LocalMeasureKind kind, int B, double alpha,
                                       Rng& rng) {
    if (B < 100) throw InsufficientResamples("coefficient test needs B >= 100");
    if (k < 0 || k >= dataset.d()) throw Error("input index out of range");
    const CoefBootstrapContext ctx = make_context(dataset, kind);
    const auto resamples = column_resamples(dataset.n(), B, rng);
    return coef_test_one(ctx, dataset, kind, k, resamples, alpha);
}

ScreeningReport coefficient_bootstrap_screen(const Dataset& dataset, LocalMeasureKind kind,
                                             int B, double alpha, std::uint64_t seed) {
    if (B < 100) throw InsufficientResamples("coefficient test needs B >= 100");
    const CoefBootstrapContext ctx = make_context(dataset, kind);
    Rng rng(derive_seed(seed, 0xC0EF));
    const auto resamples = column_resamples(dataset.n(), B, rng);

    ScreeningReport report;
    report.method = Method::CoefficientBootstrap;
    report.n = static_cast<int>(dataset.n());
    report.outcomes.resize(static_cast<size_t>(dataset.d()));
    for (int k = 0; k < dataset.d(); ++k) {
        report.outcomes[static_cast<size_t>(k)] =
            coef_test_one(ctx, dataset, kind, k, resamples, alpha);
    }
    report.selected = selected_from(report.outcomes);
    return report;
}

ScreeningReport hsic_lasso_screen(const Dataset& dataset, CvMode mode, int folds,
                                  Rng& rng, const CvParams& params) {
    CvParams p = params;
    p.shuffle_seed = rng.next_u64();
    const CvSelection sel =
        cv_select(dataset, LocalMeasureKind::HsicCenteredKernel, folds, mode, p);
    const LocalDesign design = build_design(dataset, LocalMeasureKind::HsicCenteredKernel);
    const LarsPath path = lars_positive_path(design);
    const Eigen::VectorXd beta = path.at(sel.lambda_hat);

    ScreeningReport report;
    report.method = Method::HsicLasso;
    report.n = static_cast<int>(dataset.n());
    for (int k = 0; k < dataset.d(); ++k) {
        TestOutcome out;
        out.method = Method::HsicLasso;
        out.alpha = 0.0;
        out.statistic = beta(k);
        out.reject = beta(k) > 0.0;
        out.p_value = out.reject ? 0.0 : 1.0;
        report.outcomes.push_back(out);
    }
    report.selected = selected_from(report.outcomes);
    return report;
}

}  // namespace depscreen
