#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fsindex/profile_build.hpp"
#include "fsindex/score_dist.hpp"
#include "fsindex/search.hpp"

namespace fsi {

struct IterationConfig {
    std::vector<double> evalueSchedule = defaultEvalueSchedule();
    std::size_t minHits = 30;
    std::size_t maxIterations = 5;
    /// Hook applied to hit fragments before weighting and profile
    /// construction (a place to drop low-complexity hits).  Default keeps
    /// everything.
    std::function<bool(std::string_view)> hitPrefilter;
};

/// Per-window state of the iterative profile search.  The first iteration
/// queries with the window fragment under the score matrix; later ones with
/// the PSSM built from the previous hit set.
struct IterationState {
    std::size_t windowOffset = 0;
    std::string windowFragment;
    std::optional<Pssm> pssm; // empty until iteration 1 succeeds
    std::size_t iteration = 1;
    bool active = true;
    bool converged = false;
    std::vector<FragmentRef> lastHits; // sorted provenance of the last hit set

    static IterationState forWindow(std::size_t offset, std::string fragment) {
        IterationState st;
        st.windowOffset = offset;
        st.windowFragment = std::move(fragment);
        return st;
    }
};

struct IterationOutcome {
    double evalueThreshold = 0;
    int scoreThreshold = 0;
    int epsilon = 0;
    std::size_t hitCount = 0;
    std::string status; // "active", "deactivated", "converged"
};

/// One iteration: derive the search radius from the E-value schedule, run
/// the range search, then either deactivate (too few hits), report
/// convergence (identical hit set), or build the next PSSM.  The threshold
/// uses E(t) <= schedule value; it never rises between iterations.
inline IterationOutcome iterate(IterationState& state, const FsIndex& ix,
                                const QuasiMetric& metric, const std::vector<double>& background,
                                const DirichletMixture& mixture, const IterationConfig& config) {
    if (!state.active)
        throw std::logic_error("iterate: state is inactive");
    if (state.windowFragment.size() != ix.fragLength())
        throw std::invalid_argument("iterate: window length != index fragment length");
    if (!std::is_sorted(config.evalueSchedule.rbegin(), config.evalueSchedule.rend()))
        throw std::invalid_argument("iterate: E-value schedule must be non-increasing");

    IterationOutcome out;
    out.evalueThreshold = evalueForIteration(config.evalueSchedule, state.iteration);

    QueryMeasure q = state.pssm ? QueryMeasure::forPssm(*state.pssm, state.windowFragment)
                                : QueryMeasure::forFragment(metric, state.windowFragment);
    ScoreDistribution dist = scoreDistribution(q, background, ix.size());
    std::optional<int> t = scoreThresholdForEvalue(dist, out.evalueThreshold);
    HitList hits;
    if (t) {
        out.scoreThreshold = *t;
        out.epsilon = static_cast<int>(q.maxScoreSum() - *t);
        hits = rangeSearch(ix, q, out.epsilon);
    } else {
        // even the maximum score is not significant at this threshold
        out.scoreThreshold = dist.hi() + 1;
        out.epsilon = -1;
    }
    out.hitCount = hits.size();

    if (hits.size() < config.minHits) {
        state.active = false;
        out.status = "deactivated";
        return out;
    }

    std::vector<FragmentRef> provenance;
    provenance.reserve(hits.size());
    for (const Hit& h : hits.hits)
        provenance.push_back(h.ref);
    std::sort(provenance.begin(), provenance.end(), [](const FragmentRef& a, const FragmentRef& b) {
        return a.record != b.record ? a.record < b.record : a.offset < b.offset;
    });
    // A repeated hit set is a fixed point only while the threshold holds
    // still: the next profile and search would reproduce this one exactly.
    double nextThreshold = evalueForIteration(config.evalueSchedule, state.iteration + 1);
    if (!state.lastHits.empty() && provenance == state.lastHits &&
        nextThreshold == out.evalueThreshold && state.pssm.has_value()) {
        state.active = false;
        state.converged = true;
        out.status = "converged";
        return out;
    }
    state.lastHits = std::move(provenance);

    std::vector<std::string> fragments;
    fragments.reserve(hits.size());
    for (const Hit& h : hits.hits) {
        std::string_view text = ix.store().text(h.ref);
        if (config.hitPrefilter && !config.hitPrefilter(text)) continue;
        fragments.emplace_back(text);
    }
    if (fragments.size() < config.minHits) {
        state.active = false;
        out.status = "deactivated";
        return out;
    }
    WeightedHitSet weighted = henikoffWeights(fragments, ix.store().alphabet());
    state.pssm = buildPssm(weighted, background, mixture, ix.store().alphabet());

    ++state.iteration;
    if (state.iteration > config.maxIterations) {
        state.active = false;
        out.status = "finished";
    } else {
        out.status = "active";
    }
    return out;
}

} // namespace fsi
