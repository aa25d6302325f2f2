#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "fsindex/measure.hpp"

namespace fsi {

/// Discrete pmf over an integer support [lo, lo + pmf.size() - 1].
struct DiscreteDensity {
    int lo = 0;
    std::vector<double> pmf;

    int hi() const { return lo + static_cast<int>(pmf.size()) - 1; }
    double mass() const {
        double t = 0;
        for (double p : pmf) t += p;
        return t;
    }
    double mean() const {
        double t = 0;
        for (std::size_t i = 0; i < pmf.size(); ++i) t += (lo + static_cast<double>(i)) * pmf[i];
        return t;
    }
    double variance() const {
        double mu = mean(), t = 0;
        for (std::size_t i = 0; i < pmf.size(); ++i) {
            double d = lo + static_cast<double>(i) - mu;
            t += d * d * pmf[i];
        }
        return t;
    }
};

/// pmf(t) = sum of freq(a) over letters a with score(a) = t.
inline DiscreteDensity positionalDensity(const std::vector<int>& scoreRow, const std::vector<double>& freq) {
    if (scoreRow.size() != freq.size())
        throw std::invalid_argument("positionalDensity: row/frequency size mismatch");
    for (double f : freq)
        if (f < 0) throw std::invalid_argument("positionalDensity: negative frequency");
    int lo = *std::min_element(scoreRow.begin(), scoreRow.end());
    int hi = *std::max_element(scoreRow.begin(), scoreRow.end());
    DiscreteDensity d;
    d.lo = lo;
    d.pmf.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (std::size_t a = 0; a < scoreRow.size(); ++a)
        d.pmf[static_cast<std::size_t>(scoreRow[a] - lo)] += freq[a];
    return d;
}

/// Exact distribution of a sum of independent per-position scores, with the
/// survival function P(S >= t) precomputed over the full support.
class ScoreDistribution {
public:
    ScoreDistribution() = default;

    ScoreDistribution(DiscreteDensity density, std::size_t fragLength, uint64_t datasetSize)
        : density_(std::move(density)), fragLength_(fragLength), datasetSize_(datasetSize) {
        survival_.resize(density_.pmf.size() + 1);
        survival_[density_.pmf.size()] = 0.0;
        for (std::size_t i = density_.pmf.size(); i-- > 0;)
            survival_[i] = survival_[i + 1] + density_.pmf[i];
    }

    int lo() const { return density_.lo; }
    int hi() const { return density_.hi(); }
    std::size_t fragLength() const { return fragLength_; }
    uint64_t datasetSize() const { return datasetSize_; }
    const DiscreteDensity& density() const { return density_; }

    double pmf(int t) const {
        if (t < lo() || t > hi()) return 0.0;
        return density_.pmf[static_cast<std::size_t>(t - lo())];
    }

    /// P(S >= t).
    double survival(int t) const {
        if (t <= lo()) return 1.0;
        if (t > hi()) return 0.0;
        return survival_[static_cast<std::size_t>(t - lo())];
    }

    double pvalue(int t) const { return survival(t); }
    double evalue(int t) const { return static_cast<double>(datasetSize_) * survival(t); }

private:
    DiscreteDensity density_;
    std::vector<double> survival_;
    std::size_t fragLength_ = 0;
    uint64_t datasetSize_ = 0;
};

/// Exact m-fold convolution by direct summation (supports are small:
/// per-letter half-bit scores over short fragments).
inline ScoreDistribution convolveDensities(const std::vector<DiscreteDensity>& densities,
                                           uint64_t datasetSize = 0) {
    if (densities.empty())
        throw std::invalid_argument("convolveDensities: no densities");
    DiscreteDensity acc = densities[0];
    for (std::size_t i = 1; i < densities.size(); ++i) {
        const DiscreteDensity& next = densities[i];
        DiscreteDensity out;
        out.lo = acc.lo + next.lo;
        out.pmf.assign(acc.pmf.size() + next.pmf.size() - 1, 0.0);
        for (std::size_t a = 0; a < acc.pmf.size(); ++a) {
            if (acc.pmf[a] == 0.0) continue;
            for (std::size_t b = 0; b < next.pmf.size(); ++b)
                out.pmf[a + b] += acc.pmf[a] * next.pmf[b];
        }
        acc = std::move(out);
    }
    return ScoreDistribution{std::move(acc), densities.size(), datasetSize};
}

/// Distribution of a query's similarity score against i.i.d. background
/// fragments: convolve the measure's per-position score rows.
inline ScoreDistribution scoreDistribution(const QueryMeasure& q, const std::vector<double>& background,
                                           uint64_t datasetSize) {
    std::vector<DiscreteDensity> densities;
    densities.reserve(q.length());
    for (std::size_t j = 0; j < q.length(); ++j)
        densities.push_back(positionalDensity(q.scoreRow(j), background));
    return convolveDensities(densities, datasetSize);
}

/// E(t) = n * P(S >= t).
inline double evalue(const ScoreDistribution& dist, int t) { return dist.evalue(t); }

/// Least t with E(t) <= target, or nullopt when even the maximum score fails.
inline std::optional<int> scoreThresholdForEvalue(const ScoreDistribution& dist, double targetE) {
    if (targetE <= 0)
        throw std::invalid_argument("scoreThresholdForEvalue: target must be positive");
    if (dist.evalue(dist.hi()) > targetE)
        return std::nullopt;
    int lo = dist.lo(), hi = dist.hi();
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (dist.evalue(mid) <= targetE)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

/// Score threshold mapped to a search radius: epsilon = maxScoreSum - t
/// (for matrix queries maxScoreSum is the query self-similarity).  The
/// distribution's support never exceeds maxScoreSum, so epsilon >= 0.
inline std::optional<int> epsilonForEvalue(const QueryMeasure& q, const ScoreDistribution& dist,
                                           double targetE) {
    std::optional<int> t = scoreThresholdForEvalue(dist, targetE);
    if (!t) return std::nullopt;
    return static_cast<int>(q.maxScoreSum() - *t);
}

/// Two-column dump (score, survival) for plotting.
inline void writeSurvival(std::ostream& out, const ScoreDistribution& dist) {
    for (int t = dist.lo(); t <= dist.hi(); ++t)
        out << t << "\t" << dist.survival(t) << "\n";
}

/// Iteration schedule defaults: 1.0, 1.0, 0.1, 0.1, then 0.01 from the
/// fifth iteration on.
inline double evalueForIteration(const std::vector<double>& schedule, std::size_t iteration) {
    if (schedule.empty())
        throw std::invalid_argument("evalueForIteration: empty schedule");
    std::size_t idx = std::min(iteration - 1, schedule.size() - 1);
    return schedule[idx];
}

inline const std::vector<double>& defaultEvalueSchedule() {
    static const std::vector<double> s{1.0, 1.0, 0.1, 0.1, 0.01};
    return s;
}

} // namespace fsi
