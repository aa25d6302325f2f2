#pragma once

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fsindex/alphabet.hpp"
#include "fsindex/score_matrix.hpp"

namespace fsi {

/// Position-specific score matrix, integer half-bit units.
/// Immutable; per-position minima and maxima are fixed at construction.
class Pssm {
public:
    Pssm() = default;

    Pssm(Alphabet alphabet, std::size_t length, std::vector<int> scores)
        : alphabet_(std::move(alphabet)), length_(length), scores_(std::move(scores)) {
        if (scores_.size() != length_ * alphabet_.size())
            throw std::invalid_argument("pssm: score grid size mismatch");
        rowMin_.resize(length_);
        rowMax_.resize(length_);
        for (std::size_t i = 0; i < length_; ++i) {
            int lo = std::numeric_limits<int>::max();
            int hi = std::numeric_limits<int>::min();
            for (std::size_t a = 0; a < alphabet_.size(); ++a) {
                int v = at(i, a);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            rowMin_[i] = lo;
            rowMax_[i] = hi;
        }
    }

    /// M(i,a) = s(omega_i, a): the matrix-replicated profile of a fragment.
    static Pssm fromMatrixRows(const ScoreMatrix& s, std::string_view omega) {
        std::size_t k = s.alphabet().size();
        std::vector<int> scores(omega.size() * k);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            std::size_t w = s.alphabet().indexOrThrow(omega[i]);
            for (std::size_t a = 0; a < k; ++a)
                scores[i * k + a] = s.at(w, a);
        }
        return Pssm{s.alphabet(), omega.size(), std::move(scores)};
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t length() const { return length_; }

    int at(std::size_t pos, std::size_t letter) const { return scores_[pos * alphabet_.size() + letter]; }
    int at(std::size_t pos, char c) const { return at(pos, static_cast<std::size_t>(alphabet_.indexOrThrow(c))); }

    /// Per-position minimum (the valuation shift zeta_i) and its sum.
    int rowMin(std::size_t pos) const { return rowMin_[pos]; }
    int rowMax(std::size_t pos) const { return rowMax_[pos]; }

    long long minScoreSum() const {
        long long t = 0;
        for (int v : rowMin_) t += v;
        return t;
    }
    long long maxScoreSum() const {
        long long t = 0;
        for (int v : rowMax_) t += v;
        return t;
    }

    /// Letter index maximising position pos (lowest index on ties).
    std::size_t argmax(std::size_t pos) const {
        std::size_t best = 0;
        for (std::size_t a = 1; a < alphabet_.size(); ++a)
            if (at(pos, a) > at(pos, best)) best = a;
        return best;
    }

    std::string argmaxString() const {
        std::string s(length_, ' ');
        for (std::size_t i = 0; i < length_; ++i)
            s[i] = alphabet_.letter(argmax(i));
        return s;
    }

private:
    Alphabet alphabet_;
    std::size_t length_ = 0;
    std::vector<int> scores_;
    std::vector<int> rowMin_, rowMax_;
};

inline int pssmScore(const Pssm& p, std::string_view x) {
    if (x.size() != p.length())
        throw std::invalid_argument("pssmScore: fragment length != pssm length");
    int total = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        total += p.at(i, x[i]);
    return total;
}

/// Distance-like form: sum of (rowMax - score) per position.  Non-negative;
/// zero exactly when x takes the maximising letter at every position.
inline int pssmValuation(const Pssm& p, std::string_view x) {
    if (x.size() != p.length())
        throw std::invalid_argument("pssmValuation: fragment length != pssm length");
    int total = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        total += p.rowMax(i) - p.at(i, x[i]);
    return total;
}

/// Tab-separated text: header = alphabet letters, one row per position.
inline void writePssm(std::ostream& out, const Pssm& p) {
    const Alphabet& alpha = p.alphabet();
    for (std::size_t a = 0; a < alpha.size(); ++a)
        out << (a ? "\t" : "") << alpha.letter(a);
    out << "\n";
    for (std::size_t i = 0; i < p.length(); ++i) {
        for (std::size_t a = 0; a < alpha.size(); ++a)
            out << (a ? "\t" : "") << p.at(i, a);
        out << "\n";
    }
}

inline Pssm readPssm(std::istream& in) {
    std::string line;
    std::string letters;
    std::vector<int> scores;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (letters.empty()) {
            std::string tok;
            while (ls >> tok) {
                if (tok.size() != 1) throw std::runtime_error("pssm text: bad header token '" + tok + "'");
                letters += tok[0];
            }
            continue;
        }
        int v;
        std::size_t n = 0;
        while (ls >> v) {
            scores.push_back(v);
            ++n;
        }
        if (n != letters.size())
            throw std::runtime_error("pssm text: row width mismatch");
        ++rows;
    }
    if (letters.empty() || rows == 0) throw std::runtime_error("pssm text: no data");
    return Pssm{Alphabet{letters}, rows, std::move(scores)};
}

} // namespace fsi
