#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tsf/error.hpp"
#include "tsf/forecast.hpp"
#include "tsf/optimize.hpp"
#include "tsf/series.hpp"

namespace tsf {

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    bool operator==(const ArimaOrder&) const = default;

    [[nodiscard]] std::string str() const {
        return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
    }
};

struct ArimaModel {
    ArimaOrder order;
    std::vector<double> ar;  // phi_1..phi_p
    std::vector<double> ma;  // theta_1..theta_q
    double mean = 0.0;       // subtracted before fitting when d == 0, else 0
    double sigma2 = 0.0;
    double css = 0.0;
    double aicc = 0.0;
    std::size_t train_len = 0;
    std::vector<double> tail;           // last d+p observations
    std::vector<double> residual_tail;  // last q residuals
    std::optional<MonthStamp> origin;   // set when fitted on a TimeSeries
};

struct CorrelogramPoint {
    int lag = 0;
    double value = 0.0;
    bool significant = false;
};

// ---------------------------------------------------------------------------
// Differencing

inline std::vector<double> difference(std::span<const double> x, int d) {
    if (d < 0) throw RangeError("differencing order must be >= 0, got " + std::to_string(d));
    if (x.size() <= static_cast<std::size_t>(d)) {
        throw InsufficientDataError("differencing of order " + std::to_string(d) + " needs more than " +
                                    std::to_string(d) + " points, got " + std::to_string(x.size()));
    }
    std::vector<double> w(x.begin(), x.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < w.size(); ++i) w[i] = w[i + 1] - w[i];
        w.pop_back();
    }
    return w;
}

/// Inverse of `difference`: continues the series whose `d` observations
/// immediately preceding `increments` are `anchors`.
///
/// With anchors = the first d values of x and increments = difference(x, d)
/// this rebuilds x[d..]; with anchors = the last d observations it turns
/// differenced-scale forecasts into level forecasts.
inline std::vector<double> undifference(std::span<const double> increments,
                                        std::span<const double> anchors, int d) {
    if (anchors.size() != static_cast<std::size_t>(d)) {
        throw RangeError("undifference needs exactly " + std::to_string(d) + " anchors, got " +
                         std::to_string(anchors.size()));
    }
    std::vector<double> tails(static_cast<std::size_t>(d));
    std::vector<double> level(anchors.begin(), anchors.end());
    for (int k = 0; k < d; ++k) {
        tails[static_cast<std::size_t>(k)] = level.back();
        for (std::size_t i = 0; i + 1 < level.size(); ++i) level[i] = level[i + 1] - level[i];
        level.pop_back();
    }
    std::vector<double> out;
    out.reserve(increments.size());
    for (double v : increments) {
        for (int k = d - 1; k >= 0; --k) {
            tails[static_cast<std::size_t>(k)] += v;
            v = tails[static_cast<std::size_t>(k)];
        }
        out.push_back(v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Correlograms

namespace detail {

inline std::vector<double> autocorrelations(std::span<const double> x, int max_lag) {
    const std::size_t n = x.size();
    if (max_lag < 0) throw RangeError("max_lag must be >= 0");
    if (n < static_cast<std::size_t>(max_lag) + 2) {
        throw InsufficientDataError("correlogram to lag " + std::to_string(max_lag) +
                                    " needs at least " + std::to_string(max_lag + 2) +
                                    " points, got " + std::to_string(n));
    }
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (!(denom > 0.0)) throw DegenerateInputError("series has zero variance");
    std::vector<double> r(static_cast<std::size_t>(max_lag) + 1);
    for (int k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t) {
            acc += (x[t] - mean) * (x[t + static_cast<std::size_t>(k)] - mean);
        }
        r[static_cast<std::size_t>(k)] = acc / denom;
    }
    return r;
}

inline double significance_bound(std::size_t n) { return 1.96 / std::sqrt(static_cast<double>(n)); }

}  // namespace detail

/// Sample ACF for lags 0..max_lag with the +-1.96/sqrt(n) white-noise band.
inline std::vector<CorrelogramPoint> acf(std::span<const double> x, int max_lag) {
    const auto r = detail::autocorrelations(x, max_lag);
    const double bound = detail::significance_bound(x.size());
    std::vector<CorrelogramPoint> out;
    for (int k = 0; k <= max_lag; ++k) {
        const double v = r[static_cast<std::size_t>(k)];
        out.push_back({k, v, k > 0 && std::abs(v) > bound});
    }
    return out;
}

/// Sample PACF for lags 1..max_lag via the Durbin-Levinson recursion.
inline std::vector<CorrelogramPoint> pacf(std::span<const double> x, int max_lag) {
    if (max_lag < 1) throw RangeError("pacf needs max_lag >= 1");
    const auto r = detail::autocorrelations(x, max_lag);
    const double bound = detail::significance_bound(x.size());
    std::vector<double> phi;
    std::vector<CorrelogramPoint> out;
    double v = 1.0;  // innovation variance ratio
    for (int k = 1; k <= max_lag; ++k) {
        double num = r[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) {
            num -= phi[static_cast<std::size_t>(j - 1)] * r[static_cast<std::size_t>(k - j)];
        }
        if (!(v > 0.0)) {
            throw NumericalError("Durbin-Levinson breakdown at lag " + std::to_string(k) +
                                 ": correlogram is not positive definite");
        }
        const double a = num / v;
        std::vector<double> next(static_cast<std::size_t>(k));
        for (int j = 1; j < k; ++j) {
            next[static_cast<std::size_t>(j - 1)] =
                phi[static_cast<std::size_t>(j - 1)] - a * phi[static_cast<std::size_t>(k - j - 1)];
        }
        next[static_cast<std::size_t>(k - 1)] = a;
        phi = std::move(next);
        v *= (1.0 - a * a);
        out.push_back({k, a, std::abs(a) > bound});
    }
    return out;
}

/// Smallest lag beyond which no point (lag >= 1) is significant; 0 if none is.
inline int significance_cutoff(std::span<const CorrelogramPoint> points) {
    int cut = 0;
    for (const auto& p : points) {
        if (p.lag >= 1 && p.significant) cut = std::max(cut, p.lag);
    }
    return cut;
}

// ---------------------------------------------------------------------------
// Stationary/invertible parameterization

/// Maps partial autocorrelations in (-1,1) to the coefficients of a
/// stationary AR polynomial 1 - sum phi_i z^i.
inline std::vector<double> pacf_to_coefficients(std::span<const double> r) {
    std::vector<double> phi;
    for (std::size_t k = 0; k < r.size(); ++k) {
        std::vector<double> next(k + 1);
        for (std::size_t j = 0; j < k; ++j) next[j] = phi[j] - r[k] * phi[k - 1 - j];
        next[k] = r[k];
        phi = std::move(next);
    }
    return phi;
}

/// Inverse of pacf_to_coefficients; nullopt if phi is not strictly stationary.
inline std::optional<std::vector<double>> coefficients_to_pacf(std::span<const double> phi) {
    std::vector<double> a(phi.begin(), phi.end());
    std::vector<double> r(a.size());
    for (std::size_t k = a.size(); k-- > 0;) {
        const double rk = a[k];
        if (!(std::abs(rk) < 1.0)) return std::nullopt;
        r[k] = rk;
        std::vector<double> prev(k);
        for (std::size_t j = 0; j < k; ++j) prev[j] = (a[j] + rk * a[k - 1 - j]) / (1.0 - rk * rk);
        a = std::move(prev);
    }
    return r;
}

/// Smallest root modulus of 1 + sign * sum c_i z^i (infinity for an empty polynomial).
/// Use sign = -1 for AR polynomials and +1 for MA polynomials.
inline double min_root_modulus(std::span<const double> c, double sign) {
    std::size_t deg = c.size();
    while (deg > 0 && c[deg - 1] == 0.0) --deg;
    if (deg == 0) return std::numeric_limits<double>::infinity();
    // Reciprocal roots are the eigenvalues of the companion matrix of
    // lambda^deg + sign * (c_1 lambda^{deg-1} + ... + c_deg).
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<long>(deg), static_cast<long>(deg));
    for (std::size_t j = 0; j < deg; ++j) comp(0, static_cast<long>(j)) = -sign * c[j];
    for (std::size_t i = 1; i < deg; ++i) comp(static_cast<long>(i), static_cast<long>(i) - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    double max_abs = 0.0;
    for (long i = 0; i < es.eigenvalues().size(); ++i) max_abs = std::max(max_abs, std::abs(es.eigenvalues()[i]));
    return max_abs > 0.0 ? 1.0 / max_abs : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Conditional sum of squares

/// e_t = w_t - sum phi_i w_{t-i} - sum theta_j e_{t-j}, pre-sample terms zero.
inline std::vector<double> css_residuals(std::span<const double> w, std::span<const double> phi,
                                         std::span<const double> theta) {
    std::vector<double> e(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) {
        double v = w[t];
        for (std::size_t i = 0; i < phi.size() && i < t; ++i) v -= phi[i] * w[t - i - 1];
        for (std::size_t j = 0; j < theta.size() && j < t; ++j) v -= theta[j] * e[t - j - 1];
        e[t] = v;
    }
    return e;
}

inline double css_value(std::span<const double> w, std::span<const double> phi,
                        std::span<const double> theta) {
    double s = 0.0;
    for (double e : css_residuals(w, phi, theta)) s += e * e;
    return s;
}

/// Small-sample corrected AIC from the Gaussian CSS approximation; k = p+q+1.
inline double css_aicc(double css, std::size_t n, int p, int q) {
    const double k = static_cast<double>(p + q + 1);
    const double nn = static_cast<double>(n);
    const double fit = css > 0.0 ? nn * std::log(css / nn) : -std::numeric_limits<double>::infinity();
    const double denom = nn - k - 1.0;
    const double corr = denom > 0.0 ? 2.0 * k * (k + 1.0) / denom : std::numeric_limits<double>::infinity();
    return fit + 2.0 * k + corr;
}

namespace detail {

// Unconstrained optimizer variables are atanh of the partial autocorrelations,
// kept inside |u| <= kMaxAtanh so every iterate stays strictly admissible.
inline constexpr double kMaxAtanh = 6.0;

struct ArmaCoefficients {
    std::vector<double> phi;
    std::vector<double> theta;
};

inline ArmaCoefficients unpack_arma(std::span<const double> u, int p, int q) {
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = std::tanh(u[i]);
    ArmaCoefficients c;
    c.phi = pacf_to_coefficients(std::span<const double>(r).first(static_cast<std::size_t>(p)));
    c.theta = pacf_to_coefficients(std::span<const double>(r).subspan(static_cast<std::size_t>(p)));
    for (double& t : c.theta) t = -t;
    return c;
}

inline std::optional<std::vector<double>> pack_arma(std::span<const double> phi,
                                                    std::span<const double> theta) {
    auto rp = coefficients_to_pacf(phi);
    std::vector<double> neg(theta.begin(), theta.end());
    for (double& t : neg) t = -t;
    auto rq = coefficients_to_pacf(neg);
    if (!rp || !rq) return std::nullopt;
    std::vector<double> u;
    for (double r : *rp) u.push_back(std::clamp(std::atanh(std::clamp(r, -0.999, 0.999)), -kMaxAtanh, kMaxAtanh));
    for (double r : *rq) u.push_back(std::clamp(std::atanh(std::clamp(r, -0.999, 0.999)), -kMaxAtanh, kMaxAtanh));
    return u;
}

/// Least squares via QR; returns nullopt on a rank-deficient design.
inline std::optional<Eigen::VectorXd> least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols()) return std::nullopt;
    return Eigen::VectorXd(qr.solve(y));
}

/// Hannan-Rissanen style start: long-AR residuals as proxies for the shocks,
/// then one regression of w_t on its own lags and the lagged proxies.
inline std::optional<ArmaCoefficients> hannan_rissanen(std::span<const double> w, int p, int q) {
    const long n = static_cast<long>(w.size());
    const long m = std::min<long>(std::max<long>(p + q + 2, 8), n / 4);
    if (m < 1 || n - m < 2 * (m + 1)) return std::nullopt;
    std::vector<double> ehat(w.size(), 0.0);
    if (q > 0) {
        Eigen::MatrixXd X(n - m, m);
        Eigen::VectorXd y(n - m);
        for (long t = m; t < n; ++t) {
            y(t - m) = w[static_cast<std::size_t>(t)];
            for (long i = 0; i < m; ++i) X(t - m, i) = w[static_cast<std::size_t>(t - i - 1)];
        }
        auto a = least_squares(X, y);
        if (!a) return std::nullopt;
        const Eigen::VectorXd res = y - X * (*a);
        for (long t = m; t < n; ++t) ehat[static_cast<std::size_t>(t)] = res(t - m);
    }
    const long start = std::max<long>(p, q > 0 ? m + q : 0);
    const long rows = n - start;
    const long cols = p + q;
    if (rows <= cols + 1) return std::nullopt;
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd y(rows);
    for (long t = start; t < n; ++t) {
        y(t - start) = w[static_cast<std::size_t>(t)];
        for (long i = 0; i < p; ++i) X(t - start, i) = w[static_cast<std::size_t>(t - i - 1)];
        for (long j = 0; j < q; ++j) X(t - start, p + j) = ehat[static_cast<std::size_t>(t - j - 1)];
    }
    auto b = least_squares(X, y);
    if (!b) return std::nullopt;
    ArmaCoefficients c;
    for (long i = 0; i < p; ++i) c.phi.push_back((*b)(i));
    for (long j = 0; j < q; ++j) c.theta.push_back((*b)(p + j));
    return c;
}

}  // namespace detail

/// Fits ARIMA(p,d,q) by conditional sum of squares.
///
/// No constant when d >= 1; the sample mean is removed when d == 0. The
/// stationary/invertible region is enforced by optimizing over transformed
/// partial autocorrelations. Starting points: zeros, a Hannan-Rissanen
/// estimate, and (for p+q <= 3) the best point of a coarse grid; the lowest
/// CSS over all Nelder-Mead runs wins.
inline ArimaModel css_fit(std::span<const double> series, ArimaOrder order) {
    const int p = order.p;
    const int d = order.d;
    const int q = order.q;
    if (p < 0 || d < 0 || q < 0) throw RangeError("negative ARIMA order " + order.str());
    if (series.size() <= static_cast<std::size_t>(d) ||
        series.size() - static_cast<std::size_t>(d) < static_cast<std::size_t>(10 + p + q)) {
        throw InsufficientDataError("ARIMA" + order.str() + " needs at least " +
                                    std::to_string(10 + p + q + d) + " observations, got " +
                                    std::to_string(series.size()));
    }
    auto w = difference(series, d);
    double mean = 0.0;
    if (d == 0) {
        for (double v : w) mean += v;
        mean /= static_cast<double>(w.size());
        for (double& v : w) v -= mean;
    }

    const std::size_t dims = static_cast<std::size_t>(p + q);
    auto objective = [&](const std::vector<double>& u) {
        const auto c = detail::unpack_arma(u, p, q);
        return css_value(w, c.phi, c.theta);
    };

    std::vector<double> best_u(dims, 0.0);
    double best = objective(best_u);
    if (dims > 0) {
        std::vector<std::vector<double>> starts{std::vector<double>(dims, 0.0)};
        if (auto hr = detail::hannan_rissanen(w, p, q)) {
            if (auto u = detail::pack_arma(hr->phi, hr->theta)) starts.push_back(std::move(*u));
        }
        if (dims <= 3) {
            std::vector<int> idx(dims, 0);
            std::vector<double> u(dims);
            std::vector<double> grid_best;
            double grid_val = std::numeric_limits<double>::infinity();
            for (;;) {
                for (std::size_t i = 0; i < dims; ++i) u[i] = std::atanh(-0.9 + 0.18 * idx[i]);
                const double v = objective(u);
                if (v < grid_val) {
                    grid_val = v;
                    grid_best = u;
                }
                std::size_t i = 0;
                while (i < dims && ++idx[i] > 10) idx[i++] = 0;
                if (i == dims) break;
            }
            starts.push_back(grid_best);
        }
        NelderMeadOptions opt;
        opt.initial_step = 0.5;
        opt.max_iter = 2000 * static_cast<int>(dims);
        opt.restarts = 3;
        opt.bounds = Box{std::vector<double>(dims, -detail::kMaxAtanh),
                         std::vector<double>(dims, detail::kMaxAtanh)};
        for (const auto& s : starts) {
            auto res = nelder_mead(objective, s, opt);
            if (res.value < best) {
                best = res.value;
                best_u = res.x;
            }
        }
    }
    if (!std::isfinite(best)) {
        throw NumericalError("CSS optimization for ARIMA" + order.str() + " did not reach a finite value",
                             best_u);
    }

    const auto coef = detail::unpack_arma(best_u, p, q);
    const auto e = css_residuals(w, coef.phi, coef.theta);
    ArimaModel m;
    m.order = order;
    m.ar = coef.phi;
    m.ma = coef.theta;
    m.mean = mean;
    m.css = 0.0;
    for (double v : e) m.css += v * v;
    m.sigma2 = m.css / static_cast<double>(w.size());
    m.aicc = css_aicc(m.css, w.size(), p, q);
    m.train_len = series.size();
    m.tail.assign(series.end() - (d + p), series.end());
    m.residual_tail.assign(e.end() - q, e.end());
    return m;
}

inline ArimaModel css_fit(const TimeSeries& series, ArimaOrder order) {
    auto m = css_fit(series.values(), order);
    m.origin = series.end();
    return m;
}

/// h-step point forecasts on the original scale (future shocks set to zero).
inline std::vector<double> arima_predict(const ArimaModel& m, int horizon) {
    if (horizon < 1) throw RangeError("horizon must be >= 1, got " + std::to_string(horizon));
    const int d = m.order.d;
    const auto p = static_cast<std::size_t>(m.order.p);
    const auto q = static_cast<std::size_t>(m.order.q);

    std::vector<double> w;  // trailing differenced values, oldest first
    if (p > 0) {
        w = difference(m.tail, d);
        if (d == 0) {
            for (double& v : w) v -= m.mean;
        }
    }
    std::vector<double> e(m.residual_tail);
    std::vector<double> ahead;
    for (int h = 0; h < horizon; ++h) {
        double v = 0.0;
        for (std::size_t i = 0; i < p; ++i) v += m.ar[i] * w[w.size() - 1 - i];
        for (std::size_t j = 0; j < q; ++j) v += m.ma[j] * e[e.size() - 1 - j];
        w.push_back(v);
        e.push_back(0.0);
        ahead.push_back(v);
    }
    if (d == 0) {
        for (double& v : ahead) v += m.mean;
        return ahead;
    }
    const std::span<const double> tail(m.tail);
    return undifference(ahead, tail.last(static_cast<std::size_t>(d)), d);
}

inline ForecastResult arima_forecast(const ArimaModel& m, int horizon) {
    if (!m.origin) {
        throw RangeError("model was fitted on an unstamped sequence; use arima_predict");
    }
    return ForecastResult::from_values(*m.origin, arima_predict(m, horizon));
}

// ---------------------------------------------------------------------------
// Order selection

struct OrderCandidate {
    ArimaOrder order;
    double aicc = std::numeric_limits<double>::infinity();
    double css = std::numeric_limits<double>::infinity();
    double min_root = std::numeric_limits<double>::infinity();
    bool admissible = false;  // fitted, finite, and roots clear of the unit circle
};

struct OrderSelection {
    ArimaOrder order;
    std::vector<OrderCandidate> ranked;  // admissible candidates first, by (aicc, p+q, p, q)
};

struct AutoOrderOptions {
    int max_p = 5;
    int max_q = 5;
    int max_d = 2;
    double min_root_modulus = 1.01;
};

/// Differencing heuristic: difference while the lag-1 autocorrelation exceeds
/// 0.95 or the next difference has lower variance, up to max_d.
inline int choose_differencing(std::span<const double> x, int max_d = 2) {
    auto variance = [](std::span<const double> v) {
        double mean = 0.0;
        for (double a : v) mean += a;
        mean /= static_cast<double>(v.size());
        double s = 0.0;
        for (double a : v) s += (a - mean) * (a - mean);
        return s / static_cast<double>(v.size());
    };
    std::vector<double> w(x.begin(), x.end());
    int d = 0;
    while (d < max_d && w.size() > 3) {
        const double var_w = variance(w);
        if (!(var_w > 0.0)) break;
        const auto next = difference(w, 1);
        const double r1 = detail::autocorrelations(w, 1)[1];
        if (r1 > 0.95 || variance(next) < var_w) {
            w = next;
            ++d;
        } else {
            break;
        }
    }
    return d;
}

/// Full (p,q) grid search at the heuristic d, ranked by AICc.
///
/// A fit is admissible when its CSS is finite and every AR and MA root has
/// modulus >= options.min_root_modulus. Ties go to the smaller p+q, then p, then q.
inline OrderSelection select_order(std::span<const double> series, const AutoOrderOptions& options = {}) {
    if (series.size() < 30) {
        throw InsufficientDataError("order selection needs at least 30 observations, got " +
                                    std::to_string(series.size()));
    }
    const int d = choose_differencing(series, options.max_d);
    OrderSelection sel;
    std::string attempted;
    for (int p = 0; p <= options.max_p; ++p) {
        for (int q = 0; q <= options.max_q; ++q) {
            OrderCandidate c;
            c.order = {p, d, q};
            try {
                const auto m = css_fit(series, c.order);
                c.aicc = m.aicc;
                c.css = m.css;
                c.min_root = std::min(min_root_modulus(m.ar, -1.0), min_root_modulus(m.ma, 1.0));
                c.admissible = std::isfinite(m.css) && !std::isnan(m.aicc) &&
                               c.min_root >= options.min_root_modulus;
            } catch (const Error&) {
                c.admissible = false;
            }
            attempted += (attempted.empty() ? "" : " ") + c.order.str();
            sel.ranked.push_back(c);
        }
    }
    std::stable_sort(sel.ranked.begin(), sel.ranked.end(), [](const OrderCandidate& a, const OrderCandidate& b) {
        return std::make_tuple(!a.admissible, a.aicc, a.order.p + a.order.q, a.order.p, a.order.q) <
               std::make_tuple(!b.admissible, b.aicc, b.order.p + b.order.q, b.order.p, b.order.q);
    });
    if (sel.ranked.empty() || !sel.ranked.front().admissible) {
        throw NumericalError("no admissible ARIMA fit among " + attempted);
    }
    sel.order = sel.ranked.front().order;
    return sel;
}

inline ArimaOrder auto_order(std::span<const double> series, const AutoOrderOptions& options = {}) {
    return select_order(series, options).order;
}

}  // namespace tsf
