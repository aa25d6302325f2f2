#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "fsindex/alphabet.hpp"

namespace fsi {

/// Per-position alphabet partitions and the mixed-radix bin ranking they
/// induce.  Position weights follow xi_i(sigma) = r_i(sigma) * prod_{j>i} |Sigma_j|,
/// most significant position first.
class PartitionScheme {
public:
    PartitionScheme() = default;

    /// groups[i][g] = letters of group g at position i (reduced letter index g).
    PartitionScheme(Alphabet alphabet, std::vector<std::vector<std::string>> groups)
        : alphabet_(std::move(alphabet)), m_(groups.size()) {
        if (m_ == 0)
            throw std::invalid_argument("partitions: zero positions");
        std::size_t k = alphabet_.size();
        map_.assign(m_ * k, 0xff);
        sizes_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& pos = groups[i];
            if (pos.empty())
                throw std::invalid_argument("partitions: no groups at position " + std::to_string(i));
            if (pos.size() > 0xfe)
                throw std::invalid_argument("partitions: too many groups");
            for (std::size_t g = 0; g < pos.size(); ++g) {
                if (pos[g].empty())
                    throw std::invalid_argument("partitions: empty group at position " + std::to_string(i));
                for (char c : pos[g]) {
                    int a = alphabet_.indexOf(c);
                    if (a < 0)
                        throw std::invalid_argument(std::string("partitions: letter '") + c +
                                                    "' is not in the alphabet");
                    if (map_[i * k + a] != 0xff)
                        throw std::invalid_argument(std::string("partitions: letter '") + c +
                                                    "' appears twice at position " + std::to_string(i));
                    map_[i * k + a] = static_cast<uint8_t>(g);
                }
            }
            for (std::size_t a = 0; a < k; ++a)
                if (map_[i * k + a] == 0xff)
                    throw std::invalid_argument(std::string("partitions: letter '") + alphabet_.letter(a) +
                                                "' missing at position " + std::to_string(i));
            sizes_[i] = static_cast<uint32_t>(pos.size());
        }
        weights_.resize(m_);
        uint64_t radix = 1;
        for (std::size_t i = m_; i-- > 0;) {
            weights_[i] = radix;
            if (radix > std::numeric_limits<uint64_t>::max() / sizes_[i])
                throw std::invalid_argument("partitions: bin count overflows 64 bits");
            radix *= sizes_[i];
        }
        binCount_ = radix;
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t fragLength() const { return m_; }
    uint64_t binCount() const { return binCount_; }

    uint32_t groupCount(std::size_t pos) const { return sizes_[pos]; }
    uint32_t maxGroupCount() const { return *std::max_element(sizes_.begin(), sizes_.end()); }

    /// Reduced letter of alphabet index a at position pos.
    uint8_t project(std::size_t pos, std::size_t a) const { return map_[pos * alphabet_.size() + a]; }
    uint8_t projectChar(std::size_t pos, char c) const {
        return project(pos, alphabet_.indexOrThrow(c));
    }

    /// xi_i(sigma) contribution of reduced letter sigma at position pos.
    uint64_t weight(std::size_t pos, uint8_t sigma) const { return weights_[pos] * sigma; }
    uint64_t positionRadix(std::size_t pos) const { return weights_[pos]; }

    uint64_t rank(std::string_view fragment) const {
        if (fragment.size() != m_)
            throw std::invalid_argument("rank: fragment length mismatch");
        uint64_t r = 0;
        for (std::size_t i = 0; i < m_; ++i)
            r += weight(i, projectChar(i, fragment[i]));
        return r;
    }

    /// Letters of reduced group sigma at position pos, in alphabet order.
    std::string groupLetters(std::size_t pos, uint8_t sigma) const {
        std::string out;
        for (std::size_t a = 0; a < alphabet_.size(); ++a)
            if (project(pos, a) == sigma) out += alphabet_.letter(a);
        return out;
    }

    bool operator==(const PartitionScheme& o) const {
        return alphabet_ == o.alphabet_ && m_ == o.m_ && map_ == o.map_ && sizes_ == o.sizes_;
    }

private:
    Alphabet alphabet_;
    std::size_t m_ = 0;
    std::vector<uint8_t> map_;     // m x |alphabet| -> reduced letter
    std::vector<uint32_t> sizes_;  // |Sigma_i|
    std::vector<uint64_t> weights_; // prod_{j>i} |Sigma_j|
    uint64_t binCount_ = 0;
};

/// Grammar: positions separated by '#', groups by ','.  A spec without '#'
/// is broadcast to all m positions.  Every alphabet letter must appear in
/// exactly one group per position.
inline PartitionScheme parsePartitions(std::string_view spec, std::size_t m,
                                       Alphabet alphabet = Alphabet::standard()) {
    std::vector<std::vector<std::string>> positions;
    std::size_t start = 0;
    std::vector<std::string_view> posSpecs;
    while (true) {
        std::size_t hash = spec.find('#', start);
        posSpecs.push_back(spec.substr(start, hash == std::string_view::npos ? hash : hash - start));
        if (hash == std::string_view::npos) break;
        start = hash + 1;
    }
    if (posSpecs.size() == 1) {
        posSpecs.assign(m, posSpecs[0]);
    } else if (posSpecs.size() != m) {
        throw std::invalid_argument("partitions: spec has " + std::to_string(posSpecs.size()) +
                                    " positions, expected " + std::to_string(m));
    }
    for (std::string_view ps : posSpecs) {
        std::vector<std::string> groups;
        std::size_t gstart = 0;
        while (true) {
            std::size_t comma = ps.find(',', gstart);
            std::string_view g = ps.substr(gstart, comma == std::string_view::npos ? comma : comma - gstart);
            groups.emplace_back(g);
            if (comma == std::string_view::npos) break;
            gstart = comma + 1;
        }
        positions.push_back(std::move(groups));
    }
    return PartitionScheme{std::move(alphabet), std::move(positions)};
}

/// The union of letters mentioned in a partition spec, in first-appearance
/// order.  Lets toy specs ("AB,CD,EF") define their own alphabet.
inline Alphabet alphabetFromSpec(std::string_view spec) {
    std::string letters;
    for (char c : spec)
        if (c != ',' && c != '#' && letters.find(c) == std::string::npos)
            letters += c;
    return Alphabet{letters};
}

} // namespace fsi
