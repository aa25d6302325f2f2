#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "fsindex/fs_index.hpp"
#include "fsindex/measure.hpp"

namespace fsi {

struct SearchStats {
    uint64_t binsScanned = 0;      // non-empty bins processed
    uint64_t fragmentsScanned = 0; // bin entries touched
    uint64_t residuesScanned = 0;  // per-position cost additions
    uint64_t distanceEvals = 0;    // fragments evaluated to full length

    double accessOverhead(std::size_t hits) const {
        return static_cast<double>(fragmentsScanned) / static_cast<double>(std::max<std::size_t>(hits, 1));
    }
};

struct Hit {
    FragmentRef ref;
    int distance;
    long long score;
};

struct HitList {
    std::vector<Hit> hits;
    SearchStats stats;
    int radius = 0; // range: the query epsilon; knn: the final shrunk radius

    std::size_t size() const { return hits.size(); }

    /// Deterministic output order: (distance, record, offset).
    void sortForOutput() {
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
            if (a.distance != b.distance) return a.distance < b.distance;
            if (a.ref.record != b.ref.record) return a.ref.record < b.ref.record;
            return a.ref.offset < b.ref.offset;
        });
    }
};

namespace detail {

/// Precomputed traversal tables for one query against one partition scheme:
/// the cheapest letter cost per (position, reduced letter), the cheapest
/// non-home reduced letter per position, and the home bin rank.
struct TraversalTables {
    std::vector<int> binLetterCost; // m x maxGroups
    std::vector<int> minOtherCost;  // m
    std::vector<uint8_t> homeGroup; // m
    uint64_t homeRank = 0;
    uint32_t maxGroups = 0;

    TraversalTables(const PartitionScheme& sch, const QueryMeasure& q) {
        const Alphabet& alpha = sch.alphabet();
        std::size_t m = sch.fragLength();
        maxGroups = sch.maxGroupCount();
        binLetterCost.assign(m * maxGroups, std::numeric_limits<int>::max());
        minOtherCost.assign(m, std::numeric_limits<int>::max());
        homeGroup.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t a = 0; a < alpha.size(); ++a) {
                uint8_t sigma = sch.project(j, a);
                int& slot = binLetterCost[j * maxGroups + sigma];
                slot = std::min(slot, q.cost(j, a));
            }
            homeGroup[j] = sch.project(j, q.homeLetter(j));
            homeRank += sch.weight(j, homeGroup[j]);
            for (uint8_t sigma = 0; sigma < sch.groupCount(j); ++sigma)
                if (sigma != homeGroup[j])
                    minOtherCost[j] = std::min(minOtherCost[j], binLetterCost[j * maxGroups + sigma]);
        }
    }

    int cost(std::size_t j, uint8_t sigma) const { return binLetterCost[j * maxGroups + sigma]; }
};

/// Collects hits for range mode: a flat list, fixed radius.
struct RangeCollector {
    std::vector<Hit> hits;
    long long epsilon;

    explicit RangeCollector(long long eps) : epsilon(eps) {}

    long long radius() const { return epsilon; }
    void insert(const FragmentRef& ref, int dist) { hits.push_back({ref, dist, 0}); }
    void finish(std::vector<Hit>& out) { out = std::move(hits); }
};

/// Branch-and-bound collector for kNN: max-heap of the current best k plus
/// an auxiliary list of ties at the current radius.  The radius starts at
/// +infinity and shrinks to the k-th distance.
struct KnnCollector {
    struct Entry {
        int dist;
        FragmentRef ref;
        bool operator<(const Entry& o) const { return dist < o.dist; } // max-heap on dist
    };

    std::size_t k;
    std::priority_queue<Entry> queue;
    std::vector<Hit> ties; // distance == current radius, beyond the k queued
    long long epsilon = std::numeric_limits<long long>::max() / 4;

    explicit KnnCollector(std::size_t k_) : k(k_) {}

    long long radius() const { return epsilon; }

    void insert(const FragmentRef& ref, int dist) {
        if (queue.size() < k) {
            queue.push({dist, ref});
            if (queue.size() == k)
                epsilon = queue.top().dist;
        } else if (dist < epsilon) {
            Entry displaced = queue.top();
            queue.pop();
            queue.push({dist, ref});
            long long newEps = queue.top().dist;
            if (displaced.dist == newEps) {
                // radius unchanged: the displaced point still ties at it
                ties.push_back({displaced.ref, displaced.dist, 0});
            } else {
                // radius shrank: all previous ties fell outside
                ties.clear();
            }
            epsilon = newEps;
        } else {
            // dist == epsilon (pruning admits nothing beyond it)
            ties.push_back({ref, dist, 0});
        }
    }

    void finish(std::vector<Hit>& out) {
        out = std::move(ties);
        while (!queue.empty()) {
            out.push_back({queue.top().ref, queue.top().dist, 0});
            queue.pop();
        }
    }
};

template <typename Collector>
class Traversal {
public:
    Traversal(const FsIndex& ix, const QueryMeasure& q, Collector& collector)
        : ix_(ix), q_(q), tables_(ix.scheme(), q), collector_(collector),
          m_(ix.fragLength()), cd_(m_ + 1, 0) {}

    void run() {
        uint64_t u = tables_.homeRank;
        processBin(u);
        checkNode(u, 0, 0);
    }

    SearchStats stats() const { return stats_; }

private:
    // Scans one bin, reusing cumulative distances across the shared prefixes
    // recorded in the lcp array.  CD[0..lcp_i] is valid on entry i; the one
    // early-abandon test sits at the checkpoint CD[lcp_next].
    void processBin(uint64_t u) {
        uint64_t lo = ix_.binStart(u), hi = ix_.binEnd(u);
        if (lo == hi) return;
        ++stats_.binsScanned;
        for (uint64_t i = lo; i < hi; ++i) {
            ++stats_.fragmentsScanned;
            std::string_view s = ix_.fragmentText(i);
            std::size_t l = ix_.lcp(i);
            std::size_t lnext = (i + 1 < hi) ? ix_.lcp(i + 1) : 0;
            for (std::size_t j = l; j < lnext; ++j) {
                cd_[j + 1] = cd_[j] + q_.costChar(j, s[j]);
                ++stats_.residuesScanned;
            }
            if (cd_[lnext] > collector_.radius())
                continue;
            for (std::size_t j = std::max(l, lnext); j < m_; ++j) {
                cd_[j + 1] = cd_[j] + q_.costChar(j, s[j]);
                ++stats_.residuesScanned;
            }
            ++stats_.distanceEvals;
            if (cd_[m_] <= collector_.radius())
                collector_.insert(ix_.fragmentRef(i), static_cast<int>(cd_[m_]));
        }
    }

    // Depth-first descent over the implicit tree: positions iterated from
    // m-1 down to the node's start position, one reduced-letter replacement
    // per child, pruned by the accumulated lower bound.
    void checkNode(uint64_t u, long long bound, std::size_t start) {
        const PartitionScheme& sch = ix_.scheme();
        for (std::size_t j = m_; j-- > start;) {
            if (bound + tables_.minOtherCost[j] > collector_.radius())
                continue;
            uint64_t base = u - sch.weight(j, tables_.homeGroup[j]);
            for (uint8_t sigma = 0; sigma < sch.groupCount(j); ++sigma) {
                if (sigma == tables_.homeGroup[j]) continue;
                long long childBound = bound + tables_.cost(j, sigma);
                if (childBound > collector_.radius()) continue;
                uint64_t v = base + sch.weight(j, sigma);
                processBin(v);
                checkNode(v, childBound, j + 1);
            }
        }
    }

    const FsIndex& ix_;
    const QueryMeasure& q_;
    TraversalTables tables_;
    Collector& collector_;
    std::size_t m_;
    std::vector<long long> cd_;
    SearchStats stats_;
};

inline void fillScores(const QueryMeasure& q, HitList& hl) {
    for (Hit& h : hl.hits)
        h.score = q.rawScore(h.distance);
    hl.sortForOutput();
}

} // namespace detail

/// Exact closed-ball query: every stored fragment whose per-position cost
/// sum is <= epsilon.
inline HitList rangeSearch(const FsIndex& ix, const QueryMeasure& q, int epsilon) {
    if (q.length() != ix.fragLength())
        throw std::invalid_argument("rangeSearch: query length != index fragment length");
    if (epsilon < 0)
        throw std::invalid_argument("rangeSearch: negative radius");
    HitList hl;
    detail::RangeCollector collector(epsilon);
    detail::Traversal traversal(ix, q, collector);
    traversal.run();
    collector.finish(hl.hits);
    hl.stats = traversal.stats();
    hl.radius = epsilon;
    detail::fillScores(q, hl);
    return hl;
}

inline HitList rangeSearch(const FsIndex& ix, std::string_view omega, const QuasiMetric& q, int epsilon) {
    return rangeSearch(ix, QueryMeasure::forFragment(q, omega), epsilon);
}

/// Branch-and-bound kNN: the k nearest fragments plus every tie at the k-th
/// distance.  Returns the whole dataset when it has fewer than k points.
inline HitList knnSearch(const FsIndex& ix, const QueryMeasure& q, std::size_t k) {
    if (q.length() != ix.fragLength())
        throw std::invalid_argument("knnSearch: query length != index fragment length");
    if (k < 1)
        throw std::invalid_argument("knnSearch: k must be >= 1");
    HitList hl;
    detail::KnnCollector collector(k);
    detail::Traversal traversal(ix, q, collector);
    traversal.run();
    long long radius = collector.radius();
    collector.finish(hl.hits);
    hl.stats = traversal.stats();
    hl.radius = hl.hits.empty() ? 0
                                : static_cast<int>(std::min<long long>(radius, std::numeric_limits<int>::max()));
    if (ix.size() < k && !hl.hits.empty()) {
        int worst = 0;
        for (const Hit& h : hl.hits) worst = std::max(worst, h.distance);
        hl.radius = worst;
    }
    detail::fillScores(q, hl);
    return hl;
}

inline HitList knnSearch(const FsIndex& ix, std::string_view omega, const QuasiMetric& q, std::size_t k) {
    return knnSearch(ix, QueryMeasure::forFragment(q, omega), k);
}

enum class SearchMode { Range, Knn };

/// PSSM query through the same traversal; mode picks range or kNN.
inline HitList pssmSearch(const FsIndex& ix, const Pssm& p, SearchMode mode, int epsilonOrK) {
    QueryMeasure q = QueryMeasure::forPssm(p);
    return mode == SearchMode::Range ? rangeSearch(ix, q, epsilonOrK)
                                     : knnSearch(ix, q, static_cast<std::size_t>(epsilonOrK));
}

/// Brute-force oracle: scans every fragment; the reference answer for every
/// indexed search.  distanceEvals equals the store size exactly.
inline HitList sequentialScan(const FragmentStore& store, const QueryMeasure& q, SearchMode mode,
                              long long epsilonOrK) {
    HitList hl;
    hl.stats.binsScanned = store.empty() ? 0 : 1;
    hl.stats.fragmentsScanned = store.size();
    hl.stats.distanceEvals = store.size();
    hl.stats.residuesScanned = store.size() * store.fragLength();

    std::vector<int> dists(store.size());
    for (std::size_t i = 0; i < store.size(); ++i)
        dists[i] = q.totalCost(store.text(i));

    long long radius;
    if (mode == SearchMode::Range) {
        radius = epsilonOrK;
    } else {
        std::size_t k = static_cast<std::size_t>(epsilonOrK);
        if (store.size() == 0) {
            radius = -1;
        } else if (store.size() <= k) {
            radius = *std::max_element(dists.begin(), dists.end());
        } else {
            std::vector<int> order = dists;
            std::nth_element(order.begin(), order.begin() + (k - 1), order.end());
            radius = order[k - 1];
        }
    }
    for (std::size_t i = 0; i < store.size(); ++i)
        if (dists[i] <= radius)
            hl.hits.push_back({store.ref(i), dists[i], 0});
    hl.radius = static_cast<int>(std::max<long long>(radius, 0));
    detail::fillScores(q, hl);
    return hl;
}

inline HitList sequentialScan(const FragmentStore& store, std::string_view omega, const QuasiMetric& q,
                              SearchMode mode, long long epsilonOrK) {
    return sequentialScan(store, QueryMeasure::forFragment(q, omega), mode, epsilonOrK);
}

} // namespace fsi
