#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fsindex/alphabet.hpp"

namespace fsi {

/// Residue similarity scores in integer half-bit (or matrix-native) units.
class ScoreMatrix {
public:
    ScoreMatrix() = default;
    ScoreMatrix(Alphabet alphabet, std::vector<int> scores, std::string name)
        : alphabet_(std::move(alphabet)), scores_(std::move(scores)), name_(std::move(name)) {
        if (scores_.size() != alphabet_.size() * alphabet_.size())
            throw std::invalid_argument("score matrix: size mismatch");
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const std::string& name() const { return name_; }

    int at(std::size_t a, std::size_t b) const { return scores_[a * alphabet_.size() + b]; }
    int at(char a, char b) const {
        return at(static_cast<std::size_t>(alphabet_.indexOrThrow(a)),
                  static_cast<std::size_t>(alphabet_.indexOrThrow(b)));
    }

    int selfScore(std::size_t a) const { return at(a, a); }

    bool symmetric() const {
        for (std::size_t a = 0; a < alphabet_.size(); ++a)
            for (std::size_t b = a + 1; b < alphabet_.size(); ++b)
                if (at(a, b) != at(b, a)) return false;
        return true;
    }

private:
    Alphabet alphabet_;
    std::vector<int> scores_;
    std::string name_;
};

/// Parses NCBI-style whitespace-delimited matrix text: '#' comment lines, a
/// header row of letters, then one row per letter (optionally labelled).
///
/// If the parsed letters cover the standard 20 amino acids the matrix is
/// restricted to them, dropping ambiguity codes (B, Z, X, *).  A matrix that
/// covers most but not all of the standard alphabet is rejected.  Small
/// alphabets (DNA and toy matrices) are kept as parsed, minus any '*' column.
inline ScoreMatrix loadScoreMatrix(std::istream& in, const std::string& name = "") {
    std::string headerLetters;
    std::vector<std::vector<int>> rows;
    std::vector<char> rowLetters;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        if (headerLetters.empty()) {
            std::string tok;
            while (ls >> tok) {
                if (tok.size() != 1)
                    throw std::runtime_error("score matrix '" + name + "': bad header token '" + tok + "'");
                headerLetters += tok[0];
            }
            continue;
        }
        std::string tok;
        std::vector<int> row;
        bool haveLabel = false;
        char label = 0;
        while (ls >> tok) {
            if (!haveLabel && row.empty() && (std::isalpha(static_cast<unsigned char>(tok[0])) || tok == "*") &&
                tok.size() == 1 && headerLetters.find(tok[0]) != std::string::npos) {
                haveLabel = true;
                label = tok[0];
                continue;
            }
            std::size_t pos = 0;
            int v = 0;
            try {
                v = std::stoi(tok, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error("score matrix '" + name + "': bad value '" + tok + "'");
            }
            if (pos != tok.size())
                throw std::runtime_error("score matrix '" + name + "': bad value '" + tok + "'");
            row.push_back(v);
        }
        if (row.empty()) continue;
        if (row.size() != headerLetters.size())
            throw std::runtime_error("score matrix '" + name + "': row width " + std::to_string(row.size()) +
                                     " != header width " + std::to_string(headerLetters.size()));
        rowLetters.push_back(haveLabel ? label : headerLetters[rowLetters.size()]);
        rows.push_back(std::move(row));
    }
    if (headerLetters.empty() || rows.empty())
        throw std::runtime_error("score matrix '" + name + "': no data");
    if (rows.size() != headerLetters.size())
        throw std::runtime_error("score matrix '" + name + "': expected " + std::to_string(headerLetters.size()) +
                                 " rows, got " + std::to_string(rows.size()));
    for (std::size_t i = 0; i < rowLetters.size(); ++i)
        if (rowLetters[i] != headerLetters[i])
            throw std::runtime_error("score matrix '" + name + "': row order differs from header");

    const Alphabet& std20 = Alphabet::standard();
    std::size_t standardCount = 0;
    for (char c : headerLetters)
        if (std20.contains(c)) ++standardCount;

    if (standardCount >= 15) {
        // Protein matrix: require and restrict to the full standard alphabet.
        for (char c : kStandardLetters)
            if (headerLetters.find(c) == std::string::npos)
                throw std::runtime_error("score matrix '" + name + "': missing standard letter '" +
                                         std::string(1, c) + "'");
        std::vector<int> scores(20 * 20);
        for (std::size_t a = 0; a < 20; ++a) {
            std::size_t ia = headerLetters.find(kStandardLetters[a]);
            for (std::size_t b = 0; b < 20; ++b)
                scores[a * 20 + b] = rows[ia][headerLetters.find(kStandardLetters[b])];
        }
        return ScoreMatrix{std20, std::move(scores), name};
    }

    // Custom alphabet (DNA, toy): keep as parsed, minus the '*' row/column.
    std::string letters;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < headerLetters.size(); ++i) {
        if (headerLetters[i] == '*') continue;
        letters += headerLetters[i];
        keep.push_back(i);
    }
    Alphabet alpha{letters};
    std::vector<int> scores(keep.size() * keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b)
            scores[a * keep.size() + b] = rows[keep[a]][keep[b]];
    return ScoreMatrix{std::move(alpha), std::move(scores), name};
}

inline ScoreMatrix loadScoreMatrix(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    return loadScoreMatrix(in, name);
}

/// Asymmetric residue distance derived from a score matrix, plus the
/// co-weight (self-similarity) of each letter.  dist(a,a) = 0 and
/// dist(a,b) >= 0 always hold; the triangle inequality holds exactly when
/// the source matrix passes auditTriangle.
class QuasiMetric {
public:
    QuasiMetric() = default;
    QuasiMetric(Alphabet alphabet, std::vector<int> dist, std::vector<int> coWeight, std::string name)
        : alphabet_(std::move(alphabet)), dist_(std::move(dist)), coWeight_(std::move(coWeight)),
          name_(std::move(name)) {}

    const Alphabet& alphabet() const { return alphabet_; }
    const std::string& name() const { return name_; }

    int dist(std::size_t a, std::size_t b) const { return dist_[a * alphabet_.size() + b]; }
    int dist(char a, char b) const {
        return dist(static_cast<std::size_t>(alphabet_.indexOrThrow(a)),
                    static_cast<std::size_t>(alphabet_.indexOrThrow(b)));
    }

    int coWeight(std::size_t a) const { return coWeight_[a]; }
    int coWeight(char a) const { return coWeight_[alphabet_.indexOrThrow(a)]; }

private:
    Alphabet alphabet_;
    std::vector<int> dist_;
    std::vector<int> coWeight_;
    std::string name_;
};

/// dist(a,b) = s(b,b) - s(a,b); coWeight(a) = s(a,a).
/// Requires s(a,a) > 0 and s(a,a) >= s(a,b) for all pairs; the offending
/// pair is named on rejection.  The triangle inequality is NOT required.
inline QuasiMetric toQuasiMetric(const ScoreMatrix& s) {
    const Alphabet& alpha = s.alphabet();
    std::size_t k = alpha.size();
    for (std::size_t a = 0; a < k; ++a)
        if (s.at(a, a) <= 0)
            throw std::runtime_error(std::string("matrix ") + s.name() + ": self score of '" + alpha.letter(a) +
                                     "' is not positive");
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            if (s.at(a, b) > s.at(a, a))
                throw std::runtime_error(std::string("matrix ") + s.name() + ": s(" + alpha.letter(a) + "," +
                                         alpha.letter(b) + ") exceeds self score of '" + alpha.letter(a) + "'");
    std::vector<int> dist(k * k);
    std::vector<int> coWeight(k);
    for (std::size_t b = 0; b < k; ++b)
        coWeight[b] = s.at(b, b);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            dist[a * k + b] = s.at(b, b) - s.at(a, b);
    return QuasiMetric{alpha, std::move(dist), std::move(coWeight), s.name()};
}

/// Smallest symmetric majorant: dist'(a,b) = max(dist(a,b), dist(b,a)).
/// Co-weights are dropped (the result is not score-derived).
inline QuasiMetric associatedMetric(const QuasiMetric& q) {
    std::size_t k = q.alphabet().size();
    std::vector<int> dist(k * k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            dist[a * k + b] = std::max(q.dist(a, b), q.dist(b, a));
    return QuasiMetric{q.alphabet(), std::move(dist), std::vector<int>(k, 0), q.name() + "-assoc"};
}

struct TriangleFailure {
    char a, b, c;
    int margin; // dist(a,b) + dist(b,c) - dist(a,c); negative for a failure
};

/// Every ordered triple with dist(a,b) + dist(b,c) < dist(a,c) + marginBelow.
/// The default lists the genuine failures; a positive marginBelow also
/// surfaces near-failures (triples within marginBelow of violating).  For a
/// symmetric source matrix the failure count is twice the number of
/// independent triples.
inline std::vector<TriangleFailure> auditTriangle(const QuasiMetric& q, int marginBelow = 0) {
    const Alphabet& alpha = q.alphabet();
    std::size_t k = alpha.size();
    std::vector<TriangleFailure> failures;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t c = 0; c < k; ++c) {
                if (a == b || b == c) continue; // degenerate triples hold with margin 0
                int margin = q.dist(a, b) + q.dist(b, c) - q.dist(a, c);
                if (margin < marginBelow)
                    failures.push_back({alpha.letter(a), alpha.letter(b), alpha.letter(c), margin});
            }
    return failures;
}

/// Sum of per-position letter distances (generalised Hamming form).
inline int fragmentDistance(const QuasiMetric& q, std::string_view x, std::string_view y) {
    if (x.size() != y.size())
        throw std::invalid_argument("fragmentDistance: length mismatch");
    int total = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        total += q.dist(x[i], y[i]);
    return total;
}

} // namespace fsi
