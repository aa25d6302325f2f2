#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fsindex/alphabet.hpp"
#include "fsindex/fasta.hpp"

namespace fsi {

/// Provenance of one fixed-length window: (record index, 0-based offset).
struct FragmentRef {
    uint32_t record;
    uint32_t offset;

    bool operator==(const FragmentRef&) const = default;
};

/// The corpus of all valid fixed-length windows over a set of sequences.
/// Duplicate fragments are kept as separate points.  Immutable after build.
class FragmentStore {
public:
    FragmentStore() = default;

    FragmentStore(std::vector<SequenceRecord> records, std::size_t fragLength,
                  Alphabet alphabet = Alphabet::standard())
        : records_(std::move(records)), alphabet_(std::move(alphabet)), fragLength_(fragLength) {
        if (fragLength_ < 1)
            throw std::invalid_argument("fragment length must be >= 1");
        for (std::size_t r = 0; r < records_.size(); ++r) {
            const std::string& seq = records_[r].residues;
            if (seq.size() < fragLength_) continue;
            // valid[i]: letter i belongs to the alphabet
            std::size_t run = 0; // count of trailing valid letters ending at i
            for (std::size_t i = 0; i < seq.size(); ++i) {
                run = alphabet_.contains(seq[i]) ? run + 1 : 0;
                if (run >= fragLength_)
                    fragments_.push_back({static_cast<uint32_t>(r),
                                          static_cast<uint32_t>(i + 1 - fragLength_)});
            }
        }
    }

    const std::vector<SequenceRecord>& records() const { return records_; }
    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t fragLength() const { return fragLength_; }
    std::size_t size() const { return fragments_.size(); }
    bool empty() const { return fragments_.empty(); }

    const std::vector<FragmentRef>& fragments() const { return fragments_; }
    const FragmentRef& ref(std::size_t i) const { return fragments_[i]; }

    std::string_view text(const FragmentRef& f) const {
        return std::string_view(records_[f.record].residues).substr(f.offset, fragLength_);
    }
    std::string_view text(std::size_t i) const { return text(fragments_[i]); }

private:
    std::vector<SequenceRecord> records_;
    Alphabet alphabet_;
    std::size_t fragLength_ = 0;
    std::vector<FragmentRef> fragments_;
};

inline FragmentStore extractFragments(std::vector<SequenceRecord> records, std::size_t m,
                                      Alphabet alphabet = Alphabet::standard()) {
    return FragmentStore{std::move(records), m, std::move(alphabet)};
}

/// Relative letter frequencies over all residues of all valid fragments
/// (overlapping windows recount shared residues).
inline std::vector<double> backgroundFrequencies(const FragmentStore& store) {
    if (store.empty())
        throw std::invalid_argument("backgroundFrequencies: empty store");
    std::vector<uint64_t> counts(store.alphabet().size(), 0);
    for (std::size_t i = 0; i < store.size(); ++i)
        for (char c : store.text(i))
            ++counts[store.alphabet().indexOf(c)];
    uint64_t total = 0;
    for (uint64_t c : counts) total += c;
    std::vector<double> freq(counts.size());
    for (std::size_t a = 0; a < counts.size(); ++a)
        freq[a] = static_cast<double>(counts[a]) / static_cast<double>(total);
    return freq;
}

} // namespace fsi
