#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fsindex/pssm.hpp"
#include "fsindex/score_matrix.hpp"

namespace fsi {

/// One prepared query: per-position non-negative letter costs plus score
/// bookkeeping so hits can report raw similarity scores next to distances.
///
/// For a fragment query omega under a letter quasi-metric q the cost of
/// letter a at position j is q.dist(a, omega_j); for a score-derived q this
/// equals s(omega_j, omega_j) - s(omega_j, a), so the total over a fragment
/// is the query's self-similarity minus the similarity score.  For a PSSM
/// the cost is rowMax_j - S_j(a).  Either way costs are >= 0, the home
/// letter at each position costs 0, and rawScore = maxScoreSum - totalCost.
class QueryMeasure {
public:
    QueryMeasure() = default;

    static QueryMeasure forFragment(const QuasiMetric& q, std::string_view omega) {
        const Alphabet& alpha = q.alphabet();
        QueryMeasure m;
        m.alphabet_ = alpha;
        m.length_ = omega.size();
        m.label_ = std::string(omega);
        m.cost_.resize(m.length_ * alpha.size());
        m.home_.resize(m.length_);
        m.rowMax_.resize(m.length_);
        for (std::size_t j = 0; j < m.length_; ++j) {
            std::size_t w = alpha.indexOrThrow(omega[j]);
            m.home_[j] = w;
            m.rowMax_[j] = q.coWeight(w);
            for (std::size_t a = 0; a < alpha.size(); ++a)
                m.cost_[j * alpha.size() + a] = q.dist(a, w);
        }
        return m;
    }

    static QueryMeasure forPssm(const Pssm& p, std::string label = "pssm") {
        const Alphabet& alpha = p.alphabet();
        QueryMeasure m;
        m.alphabet_ = alpha;
        m.length_ = p.length();
        m.label_ = std::move(label);
        m.cost_.resize(m.length_ * alpha.size());
        m.home_.resize(m.length_);
        m.rowMax_.resize(m.length_);
        for (std::size_t j = 0; j < m.length_; ++j) {
            m.home_[j] = p.argmax(j);
            m.rowMax_[j] = p.rowMax(j);
            for (std::size_t a = 0; a < alpha.size(); ++a)
                m.cost_[j * alpha.size() + a] = p.rowMax(j) - p.at(j, a);
        }
        return m;
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t length() const { return length_; }
    const std::string& label() const { return label_; }

    int cost(std::size_t pos, std::size_t letter) const { return cost_[pos * alphabet_.size() + letter]; }
    int costChar(std::size_t pos, char c) const { return cost(pos, static_cast<std::size_t>(alphabet_.indexOrThrow(c))); }

    /// Zero-cost letter index at a position (the query letter / argmax).
    std::size_t homeLetter(std::size_t pos) const { return home_[pos]; }

    /// Score units: s(omega_j, omega_j) for matrix queries, rowMax for PSSMs.
    int rowMax(std::size_t pos) const { return rowMax_[pos]; }

    long long maxScoreSum() const {
        long long t = 0;
        for (int v : rowMax_) t += v;
        return t;
    }

    int totalCost(std::string_view x) const {
        if (x.size() != length_)
            throw std::invalid_argument("measure: fragment length mismatch");
        int t = 0;
        for (std::size_t j = 0; j < length_; ++j)
            t += costChar(j, x[j]);
        return t;
    }

    long long rawScore(int totalCost) const { return maxScoreSum() - totalCost; }

    /// Per-position similarity scores S_j(a) = rowMax_j - cost(j,a); the
    /// exact per-position rows the score statistics convolve.
    std::vector<int> scoreRow(std::size_t pos) const {
        std::vector<int> row(alphabet_.size());
        for (std::size_t a = 0; a < alphabet_.size(); ++a)
            row[a] = rowMax_[pos] - cost(pos, a);
        return row;
    }

private:
    Alphabet alphabet_;
    std::size_t length_ = 0;
    std::string label_;
    std::vector<int> cost_;
    std::vector<std::size_t> home_;
    std::vector<int> rowMax_;
};

} // namespace fsi
