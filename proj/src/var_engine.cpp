#include "hoinet/var_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hoinet/error.hpp"

namespace hoinet {

namespace {

constexpr double kLyapunovTol = 1e-12;
constexpr int kLyapunovMaxIter = 200;
constexpr double kNegativeTol = 1e-9;

double log_two_pi_e() { return std::log(2.0 * std::numbers::pi * std::numbers::e); }

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Positive-definiteness guard for residual covariances: one diagonal jitter of
// 1e-10 * trace / dim is allowed, persistent failure is an error.
Eigen::MatrixXd guard_positive_definite(Eigen::MatrixXd cov, const char* what) {
    cov = symmetrized(cov);
    const auto d = cov.rows();
    auto acceptable = [](const Eigen::MatrixXd& c) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        return ev.minCoeff() > 0.0 && ev.array().log().sum() > std::log(1e-300);
    };
    if (acceptable(cov)) return cov;
    const double jitter = 1e-10 * std::abs(cov.trace()) / static_cast<double>(d);
    cov.diagonal().array() += jitter;
    if (!acceptable(cov)) throw NumericalError(std::string(what) + " is not positive definite");
    return cov;
}

Eigen::MatrixXd sub_block(const Eigen::MatrixXd& m, std::span<const std::size_t> idx) {
    const auto d = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            out(r, c) = m(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(idx[c]));
    return out;
}

void check_channel(std::size_t c, std::size_t m) {
    if (c >= m) throw InvalidArgument("channel index " + std::to_string(c) + " out of range");
}

double clip_negative(double v, const char* what) {
    if (v >= 0.0) return v;
    if (v > -kNegativeTol) return 0.0;
    throw NumericalError(std::string(what) + " is negative beyond tolerance: " + std::to_string(v));
}

struct LeastSquaresMoments {
    Eigen::MatrixXd xtx;  // regressors' cross products, lag-major blocks
    Eigen::MatrixXd xty;
    Eigen::MatrixXd yty;
    Eigen::Index rows = 0;
};

// Moments of the regression S_t on [S_{t-1} .. S_{t-order}] for t = start..N-1.
LeastSquaresMoments regression_moments(const Eigen::MatrixXd& centred, int order, int start) {
    const Eigen::Index m = centred.cols();
    const Eigen::Index n = centred.rows();
    const Eigen::Index t = n - start;
    Eigen::MatrixXd x(t, m * order);
    for (int k = 1; k <= order; ++k) x.middleCols((k - 1) * m, m) = centred.middleRows(start - k, t);
    const auto y = centred.bottomRows(t);

    LeastSquaresMoments mom;
    mom.xtx = Eigen::MatrixXd(m * order, m * order);
    mom.xtx.setZero();
    mom.xtx.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    mom.xtx = mom.xtx.selfadjointView<Eigen::Lower>();
    mom.xty = x.transpose() * y;
    mom.yty = y.transpose() * y;
    mom.rows = t;
    return mom;
}

struct OrderFit {
    Eigen::MatrixXd b;      // (M p) x M
    Eigen::MatrixXd sigma;  // M x M
};

OrderFit solve_order(const LeastSquaresMoments& mom, Eigen::Index m, int p) {
    const Eigen::Index k = m * p;
    Eigen::LLT<Eigen::MatrixXd> llt(mom.xtx.topLeftCorner(k, k));
    if (llt.info() != Eigen::Success)
        throw IdentificationError("regressor matrix is rank deficient at order " + std::to_string(p));
    OrderFit fit;
    fit.b = llt.solve(mom.xty.topRows(k));
    // Reject numerically singular normal equations that LLT let through.
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    if (diag.minCoeff() <= 1e-10 * diag.maxCoeff())
        throw IdentificationError("regressor matrix is rank deficient at order " + std::to_string(p));
    fit.sigma = symmetrized(mom.yty - mom.xty.topRows(k).transpose() * fit.b) /
                static_cast<double>(mom.rows);
    return fit;
}

std::vector<Eigen::MatrixXd> unpack_coeffs(const Eigen::MatrixXd& b, Eigen::Index m, int p) {
    std::vector<Eigen::MatrixXd> coeffs;
    const Eigen::MatrixXd bt = b.transpose();
    for (int k = 0; k < p; ++k) coeffs.push_back(bt.middleCols(k * m, m));
    return coeffs;
}

}  // namespace

SeriesDataset::SeriesDataset(Eigen::MatrixXd data, std::vector<std::string> channel_names)
    : data_(std::move(data)), names_(std::move(channel_names)) {
    if (data_.cols() < 1 || data_.rows() < 1) throw InvalidArgument("series dataset is empty");
    for (Eigen::Index c = 0; c < data_.cols(); ++c) {
        for (Eigen::Index r = 0; r < data_.rows(); ++r) {
            if (!std::isfinite(data_(r, c))) {
                throw InvalidArgument("non-finite value at row " + std::to_string(r) + ", channel " +
                                      std::to_string(c));
            }
        }
    }
    if (names_.empty()) {
        for (Eigen::Index c = 0; c < data_.cols(); ++c) names_.push_back("S" + std::to_string(c + 1));
    }
    if (names_.size() != static_cast<std::size_t>(data_.cols()))
        throw InvalidArgument("channel_names must have one entry per channel");
}

SeriesDataset SeriesDataset::with_data(Eigen::MatrixXd data) const {
    return SeriesDataset(std::move(data), names_);
}

Eigen::MatrixXd companion_matrix(const VarModel& model) {
    const auto m = static_cast<Eigen::Index>(model.dim());
    const int p = model.order();
    if (p == 0) return Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m * p, m * p);
    for (int k = 0; k < p; ++k) c.block(0, k * m, m, m) = model.coeffs[k];
    if (p > 1) c.bottomLeftCorner(m * (p - 1), m * (p - 1)).setIdentity();
    return c;
}

double companion_spectral_radius(const VarModel& model) {
    const auto c = companion_matrix(model);
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

VarModel make_var_model(std::vector<Eigen::MatrixXd> coeffs, Eigen::MatrixXd sigma_u) {
    const auto m = sigma_u.rows();
    if (m == 0 || sigma_u.cols() != m) throw InvalidArgument("sigma_u must be square and non-empty");
    for (const auto& a : coeffs) {
        if (a.rows() != m || a.cols() != m)
            throw InvalidArgument("coefficient matrices must be M x M");
    }
    if ((sigma_u - sigma_u.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidArgument("sigma_u is not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma_u);
    if (llt.info() != Eigen::Success) throw InvalidArgument("sigma_u is not positive definite");

    VarModel model;
    model.coeffs = std::move(coeffs);
    model.sigma_u = symmetrized(sigma_u);
    model.spectral_radius = model.coeffs.empty() ? 0.0 : companion_spectral_radius(model);
    model.stationary = model.spectral_radius < 1.0;
    return model;
}

VarModel fit_var_order(const SeriesDataset& series, int order) {
    const auto n = static_cast<Eigen::Index>(series.samples());
    const auto m = static_cast<Eigen::Index>(series.channels());
    if (order < 1) throw InvalidArgument("model order must be at least 1");
    if (n - order <= m * order + 1)
        throw InvalidArgument("series too short for a VAR(" + std::to_string(order) + ") fit");
    const Eigen::MatrixXd centred = series.data().rowwise() - series.data().colwise().mean();
    const auto mom = regression_moments(centred, order, order);
    const auto fit = solve_order(mom, m, order);
    Eigen::LLT<Eigen::MatrixXd> check(fit.sigma);
    if (check.info() != Eigen::Success)
        throw IdentificationError("residual covariance is not positive definite");
    return make_var_model(unpack_coeffs(fit.b, m, order), fit.sigma);
}

VarModel fit_var(const SeriesDataset& series, int p_max) {
    const auto n = static_cast<Eigen::Index>(series.samples());
    const auto m = static_cast<Eigen::Index>(series.channels());
    if (p_max < 1) throw InvalidArgument("p_max must be at least 1");
    if (n - p_max <= m * p_max + 1)
        throw InvalidArgument("series too short for order selection up to p_max = " +
                              std::to_string(p_max));

    const Eigen::MatrixXd centred = series.data().rowwise() - series.data().colwise().mean();
    const auto mom = regression_moments(centred, p_max, p_max);
    const double t = static_cast<double>(mom.rows);

    std::vector<double> aic;
    int best = 1;
    for (int p = 1; p <= p_max; ++p) {
        const auto fit = solve_order(mom, m, p);
        Eigen::LLT<Eigen::MatrixXd> llt(fit.sigma);
        if (llt.info() != Eigen::Success)
            throw IdentificationError("residual covariance is not positive definite at order " +
                                      std::to_string(p));
        const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
        aic.push_back(logdet + 2.0 * p * static_cast<double>(m * m) / t);
        if (aic.back() < aic[best - 1]) best = p;
    }

    auto model = fit_var_order(series, best);
    model.aic = std::move(aic);
    return model;
}

Eigen::MatrixXd CovSequence::lag(int k) const {
    if (std::abs(k) > max_lag()) throw InvalidArgument("lag beyond the covariance sequence");
    return k >= 0 ? lags[k] : Eigen::MatrixXd(lags[-k].transpose());
}

CovSequence model_covariances(const VarModel& model, int q) {
    const auto m = static_cast<Eigen::Index>(model.dim());
    const int p = model.order();
    if (q < p) throw InvalidArgument("covariance lag q must be at least the model order");
    if (!model.stationary) throw NumericalError("model is not stationary");

    CovSequence cov;
    if (p == 0) {
        cov.lags.push_back(model.sigma_u);
        for (int k = 1; k <= q; ++k) cov.lags.push_back(Eigen::MatrixXd::Zero(m, m));
        return cov;
    }

    // Doubling iteration for G = A G A^T + Q on the companion form.
    Eigen::MatrixXd a = companion_matrix(model);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m * p, m * p);
    g.topLeftCorner(m, m) = model.sigma_u;
    bool converged = false;
    for (int it = 0; it < kLyapunovMaxIter; ++it) {
        const Eigen::MatrixXd increment = a * g * a.transpose();
        g += increment;
        if (increment.cwiseAbs().maxCoeff() < kLyapunovTol) {
            converged = true;
            break;
        }
        a = a * a;
    }
    if (!converged) throw NumericalError("Lyapunov iteration did not converge");
    g = symmetrized(g);

    for (int k = 0; k < p; ++k) cov.lags.push_back(g.block(0, k * m, m, m));
    for (int k = p; k <= q; ++k) {
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(m, m);
        for (int j = 1; j <= p; ++j) next += model.coeffs[j - 1] * cov.lags[k - j];
        cov.lags.push_back(std::move(next));
    }
    return cov;
}

RestrictedModel restricted_model(const CovSequence& cov, std::span<const std::size_t> subset, int q) {
    if (subset.empty()) throw InvalidArgument("restricted model needs a non-empty subset");
    if (q < 0 || q > cov.max_lag()) throw InvalidArgument("restricted order exceeds available lags");
    const auto m = static_cast<std::size_t>(cov.lags.front().rows());
    for (auto c : subset) check_channel(c, m);

    const auto d = static_cast<Eigen::Index>(subset.size());
    std::vector<Eigen::MatrixXd> g;
    for (int k = 0; k <= q; ++k) g.push_back(sub_block(cov.lags[k], subset));

    RestrictedModel out;
    out.subset.assign(subset.begin(), subset.end());
    if (q == 0) {
        out.residual_cov = guard_positive_definite(g[0], "restricted residual covariance");
        return out;
    }

    // [A_1 .. A_q] R = [G_1 .. G_q], R block (k, j) = G_{j-k}.
    Eigen::MatrixXd r(d * q, d * q);
    Eigen::MatrixXd rhs(d * q, d);  // [G_1 .. G_q]^T stacked
    for (int k = 0; k < q; ++k) {
        for (int j = 0; j < q; ++j) {
            r.block(k * d, j * d, d, d) =
                j >= k ? g[j - k] : Eigen::MatrixXd(g[k - j].transpose());
        }
        rhs.middleRows(k * d, d) = g[k + 1].transpose();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(r);
    if (llt.info() != Eigen::Success)
        throw NumericalError("block-Toeplitz system is singular: channels are linearly dependent");
    const Eigen::MatrixXd at = llt.solve(rhs);  // stacked A_k^T

    Eigen::MatrixXd resid = g[0] - at.transpose() * rhs;
    for (int k = 0; k < q; ++k) out.coeffs.push_back(at.middleRows(k * d, d).transpose());
    out.residual_cov = guard_positive_definite(resid, "restricted residual covariance");
    return out;
}

Eigen::MatrixXd restricted_residual_cov(const CovSequence& cov, std::span<const std::size_t> subset,
                                        int q) {
    return restricted_model(cov, subset, q).residual_cov;
}

double entropy_rate(const Eigen::MatrixXd& residual_cov) {
    const auto d = residual_cov.rows();
    if (d == 0 || residual_cov.cols() != d) throw InvalidArgument("residual covariance must be square");
    Eigen::LLT<Eigen::MatrixXd> llt(residual_cov);
    if (llt.info() != Eigen::Success) throw NumericalError("residual covariance has non-positive determinant");
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return 0.5 * (static_cast<double>(d) * log_two_pi_e() + logdet);
}

SubsetEntropyRates::SubsetEntropyRates(CovSequence cov, int q) : cov_(std::move(cov)), q_(q) {
    if (cov_.lags.empty()) throw InvalidArgument("empty covariance sequence");
    if (cov_.lags.front().rows() > 64) throw InvalidArgument("at most 64 channels are supported");
    if (q_ < 0 || q_ > cov_.max_lag()) throw InvalidArgument("restricted order exceeds available lags");
}

double SubsetEntropyRates::rate(std::span<const std::size_t> subset) {
    if (subset.empty()) return 0.0;
    std::uint64_t key = 0;
    for (auto c : subset) {
        check_channel(c, static_cast<std::size_t>(cov_.lags.front().rows()));
        key |= std::uint64_t{1} << c;
    }
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const double h = entropy_rate(restricted_residual_cov(cov_, subset, q_));
    cache_.emplace(key, h);
    return h;
}

double SubsetEntropyRates::mir(std::size_t i, std::size_t j) {
    if (i == j) throw InvalidArgument("MIR needs two distinct channels");
    const std::size_t si[] = {i};
    const std::size_t sj[] = {j};
    const std::size_t sij[] = {std::min(i, j), std::max(i, j)};
    return clip_negative(rate(si) + rate(sj) - rate(sij), "MIR");
}

double SubsetEntropyRates::cmir(std::size_t i, std::size_t j, std::span<const std::size_t> zset) {
    if (i == j) throw InvalidArgument("cMIR needs two distinct channels");
    if (std::find(zset.begin(), zset.end(), i) != zset.end() ||
        std::find(zset.begin(), zset.end(), j) != zset.end())
        throw InvalidArgument("conditioning set overlaps the linked channels");
    if (zset.empty()) return mir(i, j);

    // Sorting makes cmir(i,j|z) and cmir(j,i|z) evaluate identical expressions.
    const auto lo = std::min(i, j);
    const auto hi = std::max(i, j);
    std::vector<std::size_t> z(zset.begin(), zset.end());
    std::vector<std::size_t> lo_z{lo}, hi_z{hi}, all{lo, hi};
    lo_z.insert(lo_z.end(), z.begin(), z.end());
    hi_z.insert(hi_z.end(), z.begin(), z.end());
    all.insert(all.end(), z.begin(), z.end());
    const std::size_t slo[] = {lo};

    const double h_lo = rate(slo);
    const double i_lo_hiz = h_lo + rate(hi_z) - rate(all);
    const double i_lo_z = h_lo + rate(z) - rate(lo_z);
    return clip_negative(i_lo_hiz - i_lo_z, "cMIR");
}

double mir(const VarModel& model, std::size_t i, std::size_t j, int q) {
    check_channel(i, model.dim());
    check_channel(j, model.dim());
    SubsetEntropyRates rates(model_covariances(model, std::max(q, model.order())), q);
    return rates.mir(i, j);
}

double cmir(const VarModel& model, std::size_t i, std::size_t j, std::span<const std::size_t> zset,
            int q) {
    check_channel(i, model.dim());
    check_channel(j, model.dim());
    SubsetEntropyRates rates(model_covariances(model, std::max(q, model.order())), q);
    return rates.cmir(i, j, zset);
}

SeriesDataset simulate_var(const VarModel& model, std::size_t n, Rng& rng, std::size_t burn_in) {
    const auto m = static_cast<Eigen::Index>(model.dim());
    const int p = model.order();
    Eigen::LLT<Eigen::MatrixXd> llt(model.sigma_u);
    const Eigen::MatrixXd chol = llt.matrixL();
    std::normal_distribution<double> normal(0.0, 1.0);

    const auto total = static_cast<Eigen::Index>(n + burn_in);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(total, m);
    Eigen::VectorXd z(m);
    for (Eigen::Index t = 0; t < total; ++t) {
        for (Eigen::Index c = 0; c < m; ++c) z(c) = normal(rng);
        Eigen::VectorXd x = chol * z;
        for (int k = 1; k <= p && k <= t; ++k) x += model.coeffs[k - 1] * s.row(t - k).transpose();
        s.row(t) = x.transpose();
    }
    return SeriesDataset(s.bottomRows(static_cast<Eigen::Index>(n)));
}

}  // namespace hoinet
