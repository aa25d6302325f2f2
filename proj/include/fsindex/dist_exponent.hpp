#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace fsi {

/// Empirical cumulative distance distribution from sampled pairs: strictly
/// increasing distances r, F values in (0,1], and the cumulative pair count
/// behind each step (used to skip noisy leading points).
struct EmpiricalDistanceCdf {
    std::vector<double> r;
    std::vector<double> F;
    std::vector<uint64_t> cumulativePairs;
    uint64_t pointsSampled = 0;
    uint64_t pairsEvaluated = 0;

    static EmpiricalDistanceCdf fromDistances(std::vector<double> dists, uint64_t pointsSampled) {
        if (dists.empty())
            throw std::invalid_argument("distance cdf: no pair distances");
        std::sort(dists.begin(), dists.end());
        EmpiricalDistanceCdf cdf;
        cdf.pointsSampled = pointsSampled;
        cdf.pairsEvaluated = dists.size();
        double total = static_cast<double>(dists.size());
        std::size_t i = 0;
        while (i < dists.size()) {
            std::size_t j = i;
            while (j < dists.size() && dists[j] == dists[i]) ++j;
            cdf.r.push_back(dists[i]);
            cdf.F.push_back(static_cast<double>(j) / total);
            cdf.cumulativePairs.push_back(j);
            i = j;
        }
        return cdf;
    }
};

/// Pairwise distances over a random point subsample sized so the number of
/// within-subsample pairs approximately meets the budget.
inline EmpiricalDistanceCdf sampleDistanceCdf(std::size_t pointCount,
                                              const std::function<double(std::size_t, std::size_t)>& dist,
                                              uint64_t pairBudget, std::mt19937_64& rng) {
    if (pointCount < 2)
        throw std::invalid_argument("sampleDistanceCdf: need at least 2 points");
    std::size_t want = static_cast<std::size_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(pairBudget))) / 2.0) + 1;
    std::size_t sample = std::min(pointCount, std::max<std::size_t>(want, 2));

    std::vector<std::size_t> ids(pointCount);
    for (std::size_t i = 0; i < pointCount; ++i) ids[i] = i;
    if (sample < pointCount) {
        for (std::size_t i = 0; i < sample; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pointCount - 1);
            std::swap(ids[i], ids[pick(rng)]);
        }
        ids.resize(sample);
    }

    std::vector<double> dists;
    dists.reserve(sample * (sample - 1) / 2);
    for (std::size_t i = 0; i < sample; ++i)
        for (std::size_t j = i + 1; j < sample; ++j)
            dists.push_back(dist(ids[i], ids[j]));
    return EmpiricalDistanceCdf::fromDistances(std::move(dists), sample);
}

struct LogLogOptions {
    double percentileCap = 0.05; // window ends before F reaches this
    uint64_t minPairObservations = 5; // skip leading steps with fewer pairs
};

/// Least-squares slope of log F vs log r over the small-distance window.
inline double estimateLogLogSlope(const EmpiricalDistanceCdf& cdf, const LogLogOptions& opt = {}) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < cdf.r.size(); ++i) {
        if (cdf.F[i] >= opt.percentileCap) break;
        if (cdf.r[i] <= 0 || cdf.F[i] <= 0) continue;
        if (cdf.cumulativePairs[i] < opt.minPairObservations) continue;
        lx.push_back(std::log(cdf.r[i]));
        ly.push_back(std::log(cdf.F[i]));
    }
    if (lx.size() < 2)
        throw std::runtime_error("estimateLogLogSlope: degenerate fitting window");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0)
        throw std::runtime_error("estimateLogLogSlope: zero variance in log r");
    return sxy / sxx;
}

struct MonomialFitOptions {
    std::vector<double> candidates;          // exponents to try; default 1..20
    std::vector<double> windowQuantiles;     // F levels defining window ends L
    MonomialFitOptions() {
        for (int p = 1; p <= 20; ++p) candidates.push_back(p);
        windowQuantiles = {0.01, 0.02, 0.05, 0.10, 0.15, 0.25, 0.40};
    }
};

struct MonomialFitDiagnostics {
    struct Window {
        double L;
        double bestExponent;
        double bestError;
        double coefficient;
    };
    std::vector<Window> windows;
    double estimate = 0;
};

namespace detail {

/// Closed-form least-squares coefficient of a*x^p fitted to the step
/// function y over [0, L]: a = (2p+1)/((p+1) L^{2p+1}) * sum y_j (x_{j+1}^{p+1} - x_j^{p+1}).
inline double monomialCoefficient(const std::vector<double>& x, const std::vector<double>& y, double L,
                                  double p) {
    double acc = 0;
    for (std::size_t j = 0; j + 1 < x.size(); ++j)
        acc += y[j] * (std::pow(x[j + 1], p + 1) - std::pow(x[j], p + 1));
    if (!x.empty())
        acc += y.back() * (std::pow(L, p + 1) - std::pow(x.back(), p + 1));
    return (2 * p + 1) / ((p + 1) * std::pow(L, 2 * p + 1)) * acc;
}

} // namespace detail

/// Monomial a*x^p fit over a family of window ends: the coefficient comes
/// from the closed form on the training half, the exponent is scored on the
/// testing half, and the final estimate takes the maximum best-exponent over
/// all windows.
inline MonomialFitDiagnostics estimateMonomialFit(const EmpiricalDistanceCdf& cdf,
                                                  const MonomialFitOptions& opt = {}) {
    if (opt.candidates.empty())
        throw std::invalid_argument("estimateMonomialFit: no candidate exponents");
    MonomialFitDiagnostics diag;
    for (double q : opt.windowQuantiles) {
        // window: all cdf steps with F <= q, positive r
        std::vector<double> x, y;
        for (std::size_t i = 0; i < cdf.r.size(); ++i) {
            if (cdf.F[i] > q) break;
            if (cdf.r[i] <= 0) continue;
            x.push_back(cdf.r[i]);
            y.push_back(cdf.F[i]);
        }
        if (x.size() < 4) continue;
        double L = x.back();
        std::vector<double> trainX, trainY, testX, testY;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i % 2 == 0) {
                trainX.push_back(x[i]);
                trainY.push_back(y[i]);
            } else {
                testX.push_back(x[i]);
                testY.push_back(y[i]);
            }
        }
        double bestP = opt.candidates.front();
        double bestErr = std::numeric_limits<double>::infinity();
        double bestA = 0;
        for (double p : opt.candidates) {
            double a = detail::monomialCoefficient(trainX, trainY, L, p);
            double err = 0;
            for (std::size_t i = 0; i < testX.size(); ++i) {
                double d = testY[i] - a * std::pow(testX[i], p);
                err += d * d;
            }
            if (err < bestErr) {
                bestErr = err;
                bestP = p;
                bestA = a;
            }
        }
        diag.windows.push_back({L, bestP, bestErr, bestA});
    }
    if (diag.windows.empty())
        throw std::runtime_error("estimateMonomialFit: all fitting windows degenerate");
    diag.estimate = 0;
    for (const auto& w : diag.windows)
        diag.estimate = std::max(diag.estimate, w.bestExponent);
    return diag;
}

// ---- synthetic point generators for calibration runs ----

enum class PointMetric { L2, Linf, Geodesic };

struct PointCloud {
    std::size_t dim = 0;
    std::vector<double> coords; // n x dim
    PointMetric metric = PointMetric::L2;

    std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }

    double distance(std::size_t i, std::size_t j) const {
        const double* a = coords.data() + i * dim;
        const double* b = coords.data() + j * dim;
        switch (metric) {
        case PointMetric::Linf: {
            double best = 0;
            for (std::size_t d = 0; d < dim; ++d)
                best = std::max(best, std::abs(a[d] - b[d]));
            return best;
        }
        case PointMetric::Geodesic: {
            double dot = 0;
            for (std::size_t d = 0; d < dim; ++d) dot += a[d] * b[d];
            dot = std::clamp(dot, -1.0, 1.0);
            return std::acos(dot);
        }
        case PointMetric::L2:
        default: {
            double s = 0;
            for (std::size_t d = 0; d < dim; ++d) {
                double t = a[d] - b[d];
                s += t * t;
            }
            return std::sqrt(s);
        }
        }
    }
};

inline PointCloud generateCube(std::size_t n, std::size_t dim, PointMetric metric, std::mt19937_64& rng) {
    PointCloud pc;
    pc.dim = dim;
    pc.metric = metric;
    pc.coords.resize(n * dim);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& c : pc.coords) c = u(rng);
    return pc;
}

inline PointCloud generateGaussian(std::size_t n, std::size_t dim, std::mt19937_64& rng) {
    PointCloud pc;
    pc.dim = dim;
    pc.metric = PointMetric::L2;
    pc.coords.resize(n * dim);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& c : pc.coords) c = g(rng);
    return pc;
}

inline PointCloud generateSphere(std::size_t n, std::size_t dim, PointMetric metric, std::mt19937_64& rng) {
    PointCloud pc = generateGaussian(n, dim, rng);
    pc.metric = metric;
    for (std::size_t i = 0; i < n; ++i) {
        double norm = 0;
        for (std::size_t d = 0; d < dim; ++d) {
            double v = pc.coords[i * dim + d];
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm == 0) norm = 1;
        for (std::size_t d = 0; d < dim; ++d)
            pc.coords[i * dim + d] /= norm;
    }
    return pc;
}

} // namespace fsi
