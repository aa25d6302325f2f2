#pragma once

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <vector>

#include "fsindex/fragment_store.hpp"
#include "fsindex/partitions.hpp"

namespace fsi {

/// The bin/frag/lcp structure: fragment references counting-sorted by bin
/// rank, each bin sorted lexicographically (ties by provenance), and the
/// longest-common-prefix of consecutive in-bin entries.  lcp is 0 at the
/// first entry of every bin, so each bin scan is self-contained.
///
/// Holds a reference to the store it was built over; the store must stay
/// alive and unmoved for the index's lifetime.
class FsIndex {
public:
    FsIndex() = default;

    FsIndex(const FragmentStore& store, PartitionScheme scheme)
        : store_(&store), scheme_(std::move(scheme)) {
        if (store.fragLength() != scheme_.fragLength())
            throw std::invalid_argument("index: store and partition fragment lengths differ");
        if (store.alphabet() != scheme_.alphabet())
            throw std::invalid_argument("index: store and partition alphabets differ");
        if (store.fragLength() > 255)
            throw std::invalid_argument("index: fragment length exceeds 255");
        build();
    }

    /// Adopts already-validated arrays (persistence path).
    FsIndex(const FragmentStore& store, PartitionScheme scheme, std::vector<uint64_t> bin,
            std::vector<FragmentRef> frag, std::vector<uint8_t> lcp)
        : store_(&store), scheme_(std::move(scheme)), bin_(std::move(bin)), frag_(std::move(frag)),
          lcp_(std::move(lcp)) {}

    const FragmentStore& store() const { return *store_; }
    const PartitionScheme& scheme() const { return scheme_; }
    std::size_t fragLength() const { return scheme_.fragLength(); }
    uint64_t binCount() const { return scheme_.binCount(); }
    std::size_t size() const { return frag_.size(); }

    const std::vector<uint64_t>& binArray() const { return bin_; }
    const std::vector<FragmentRef>& fragArray() const { return frag_; }
    const std::vector<uint8_t>& lcpArray() const { return lcp_; }

    uint64_t binStart(uint64_t u) const { return bin_[u]; }
    uint64_t binEnd(uint64_t u) const { return bin_[u + 1]; }
    bool binEmpty(uint64_t u) const { return bin_[u] == bin_[u + 1]; }

    std::string_view fragmentText(uint64_t i) const { return store_->text(frag_[i]); }
    const FragmentRef& fragmentRef(uint64_t i) const { return frag_[i]; }
    uint8_t lcp(uint64_t i) const { return lcp_[i]; }

    uint64_t nonEmptyBins() const {
        uint64_t n = 0;
        for (uint64_t u = 0; u < binCount(); ++u)
            if (!binEmpty(u)) ++n;
        return n;
    }

    uint64_t maxBinSize() const {
        uint64_t best = 0;
        for (uint64_t u = 0; u < binCount(); ++u)
            best = std::max(best, binEnd(u) - binStart(u));
        return best;
    }

    bool structurallyEqual(const FsIndex& o) const {
        return scheme_ == o.scheme_ && bin_ == o.bin_ && frag_ == o.frag_ && lcp_ == o.lcp_;
    }

private:
    void build() {
        const FragmentStore& s = *store_;
        const std::size_t n = s.size();
        const uint64_t N = scheme_.binCount();

        // Pass 1: count bin sizes; pass 2: place fragments (counting sort).
        bin_.assign(N + 1, 0);
        std::vector<uint64_t> ranks(n);
        for (std::size_t i = 0; i < n; ++i) {
            ranks[i] = scheme_.rank(s.text(i));
            ++bin_[ranks[i] + 1];
        }
        for (uint64_t u = 1; u <= N; ++u)
            bin_[u] += bin_[u - 1];
        frag_.resize(n);
        std::vector<uint64_t> cursor(bin_.begin(), bin_.end() - 1);
        for (std::size_t i = 0; i < n; ++i)
            frag_[cursor[ranks[i]]++] = s.ref(i);

        // Pass 3: sort each bin lexicographically, stable by provenance.
        auto less = [&s](const FragmentRef& a, const FragmentRef& b) {
            std::string_view ta = s.text(a), tb = s.text(b);
            if (int c = ta.compare(tb); c != 0) return c < 0;
            if (a.record != b.record) return a.record < b.record;
            return a.offset < b.offset;
        };
        for (uint64_t u = 0; u < N; ++u)
            std::sort(frag_.begin() + bin_[u], frag_.begin() + bin_[u + 1], less);

        // Pass 4: longest common prefixes, reset at bin boundaries.
        lcp_.assign(n, 0);
        for (uint64_t u = 0; u < N; ++u) {
            for (uint64_t i = bin_[u] + 1; i < bin_[u + 1]; ++i) {
                std::string_view prev = s.text(frag_[i - 1]), cur = s.text(frag_[i]);
                std::size_t k = 0;
                while (k < cur.size() && prev[k] == cur[k]) ++k;
                lcp_[i] = static_cast<uint8_t>(k);
            }
        }
    }

    const FragmentStore* store_ = nullptr;
    PartitionScheme scheme_;
    std::vector<uint64_t> bin_;
    std::vector<FragmentRef> frag_;
    std::vector<uint8_t> lcp_;
};

inline FsIndex buildIndex(const FragmentStore& store, PartitionScheme scheme) {
    return FsIndex{store, std::move(scheme)};
}

} // namespace fsi
