#pragma once

// Linear-Gaussian analysis of multivariate time series: VAR identification,
// covariance propagation, restricted (subset) models and the entropy rates,
// mutual information rates (MIR) and conditional MIR built on them.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hoinet/random.hpp"

namespace hoinet {

/// Default order of restricted models.
inline constexpr int kDefaultRestrictedOrder = 20;
/// Default upper bound for AIC order selection.
inline constexpr int kDefaultMaxOrder = 20;

/// N samples x M channels of finite real values.
class SeriesDataset {
public:
    SeriesDataset() = default;
    explicit SeriesDataset(Eigen::MatrixXd data, std::vector<std::string> channel_names = {});

    std::size_t samples() const { return static_cast<std::size_t>(data_.rows()); }
    std::size_t channels() const { return static_cast<std::size_t>(data_.cols()); }
    const Eigen::MatrixXd& data() const { return data_; }
    const std::vector<std::string>& channel_names() const { return names_; }

    SeriesDataset with_data(Eigen::MatrixXd data) const;

private:
    Eigen::MatrixXd data_;
    std::vector<std::string> names_;
};

/// S_n = sum_k A_k S_{n-k} + U_n with Cov(U) = sigma_u.
struct VarModel {
    std::vector<Eigen::MatrixXd> coeffs;  // A_1 .. A_p
    Eigen::MatrixXd sigma_u;
    bool stationary = true;
    double spectral_radius = 0.0;
    std::vector<double> aic;  // AIC(p) for p = 1..p_max when fitted; empty otherwise

    std::size_t dim() const { return static_cast<std::size_t>(sigma_u.rows()); }
    int order() const { return static_cast<int>(coeffs.size()); }
};

/// Validates shapes and symmetry/positive definiteness of sigma_u and fills
/// in the stationarity fields.
VarModel make_var_model(std::vector<Eigen::MatrixXd> coeffs, Eigen::MatrixXd sigma_u);

/// Block companion matrix of the model (Mp x Mp).
Eigen::MatrixXd companion_matrix(const VarModel& model);

/// Largest eigenvalue modulus of the companion matrix.
double companion_spectral_radius(const VarModel& model);

/// Least-squares fit at a fixed order on mean-removed data.
VarModel fit_var_order(const SeriesDataset& series, int order);

/// Least-squares fit with the order chosen in [1, p_max] by
/// AIC(p) = ln det Sigma(p) + 2 p M^2 / T, all orders compared on the same
/// T = N - p_max samples. The selected order is refitted on all N - p samples.
VarModel fit_var(const SeriesDataset& series, int p_max = kDefaultMaxOrder);

/// Autocovariances Gamma_k = E[S_n S_{n-k}^T], k = 0..q.
struct CovSequence {
    std::vector<Eigen::MatrixXd> lags;

    int max_lag() const { return static_cast<int>(lags.size()) - 1; }
    /// Gamma_k for any |k| <= max_lag, using Gamma_{-k} = Gamma_k^T.
    Eigen::MatrixXd lag(int k) const;
};

/// Gamma_0..Gamma_{p-1} from the companion-form Lyapunov equation, then the
/// Yule-Walker recursion up to lag q (q >= p).
CovSequence model_covariances(const VarModel& model, int q);

/// Order-q autoregression of a channel subset implied by a covariance sequence.
struct RestrictedModel {
    std::vector<std::size_t> subset;
    std::vector<Eigen::MatrixXd> coeffs;
    Eigen::MatrixXd residual_cov;
};

RestrictedModel restricted_model(const CovSequence& cov, std::span<const std::size_t> subset, int q);

Eigen::MatrixXd restricted_residual_cov(const CovSequence& cov, std::span<const std::size_t> subset,
                                        int q);

/// 0.5 * ln((2 pi e)^d det(residual_cov)), nats per sample.
double entropy_rate(const Eigen::MatrixXd& residual_cov);

/// Memoised entropy rates of channel subsets for one covariance sequence.
/// Not thread-safe; use one instance per task.
class SubsetEntropyRates {
public:
    SubsetEntropyRates(CovSequence cov, int q);

    double rate(std::span<const std::size_t> subset);
    const CovSequence& covariances() const { return cov_; }
    int restricted_order() const { return q_; }

    double mir(std::size_t i, std::size_t j);
    double cmir(std::size_t i, std::size_t j, std::span<const std::size_t> zset);

private:
    CovSequence cov_;
    int q_;
    std::unordered_map<std::uint64_t, double> cache_;
};

/// Mutual information rate between channels i and j.
double mir(const VarModel& model, std::size_t i, std::size_t j, int q = kDefaultRestrictedOrder);

/// Conditional MIR I(i;j|zset) = I(i;{j,z}) - I(i;z).
double cmir(const VarModel& model, std::size_t i, std::size_t j, std::span<const std::size_t> zset,
            int q = kDefaultRestrictedOrder);

/// Draws n samples from the model after `burn_in` discarded samples.
SeriesDataset simulate_var(const VarModel& model, std::size_t n, Rng& rng, std::size_t burn_in = 1000);

}  // namespace hoinet
