#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "fsindex/alphabet.hpp"
#include "fsindex/dirichlet.hpp"
#include "fsindex/pssm.hpp"

namespace fsi {

/// Equal-length fragments with positive per-fragment weights whose sum is
/// kept equal to the raw hit count.
struct WeightedHitSet {
    std::vector<std::string> fragments;
    std::vector<double> weights;

    std::size_t size() const { return fragments.size(); }
    double totalWeight() const {
        double t = 0;
        for (double w : weights) t += w;
        return t;
    }
};

/// Position-based sequence weights: at each position a fragment collects
/// 1/(r*c), r = distinct letters there, c = multiplicity of its own letter;
/// summed over positions, then rescaled so the weights sum to the hit count.
inline WeightedHitSet henikoffWeights(const std::vector<std::string>& hits,
                                      const Alphabet& alphabet = Alphabet::standard()) {
    if (hits.empty())
        throw std::invalid_argument("henikoffWeights: empty hit set");
    std::size_t m = hits[0].size();
    for (const std::string& h : hits)
        if (h.size() != m) throw std::invalid_argument("henikoffWeights: fragment length mismatch");

    std::vector<double> weights(hits.size(), 0.0);
    std::vector<int> counts(alphabet.size());
    for (std::size_t j = 0; j < m; ++j) {
        std::fill(counts.begin(), counts.end(), 0);
        int distinct = 0;
        for (const std::string& h : hits) {
            int a = alphabet.indexOrThrow(h[j]);
            if (counts[a]++ == 0) ++distinct;
        }
        for (std::size_t i = 0; i < hits.size(); ++i) {
            int a = alphabet.indexOrThrow(hits[i][j]);
            weights[i] += 1.0 / (static_cast<double>(distinct) * counts[a]);
        }
    }
    double total = 0;
    for (double w : weights) total += w;
    double scale = static_cast<double>(hits.size()) / total;
    for (double& w : weights) w *= scale;
    return WeightedHitSet{hits, std::move(weights)};
}

/// Half-bit log-odds rounding, half away from zero.
inline int halfBitScore(double posterior, double background) {
    double bits = std::log2(posterior / background);
    double halfBits = 2.0 * bits;
    return static_cast<int>(halfBits >= 0 ? std::floor(halfBits + 0.5) : std::ceil(halfBits - 0.5));
}

/// Per position: weighted letter counts -> Dirichlet-mixture posterior ->
/// integer half-bit log-odds against the background.
inline Pssm buildPssm(const WeightedHitSet& weighted, const std::vector<double>& background,
                      const DirichletMixture& mixture, const Alphabet& alphabet = Alphabet::standard()) {
    if (weighted.fragments.empty())
        throw std::invalid_argument("buildPssm: empty hit set");
    if (background.size() != alphabet.size())
        throw std::invalid_argument("buildPssm: background size mismatch");
    std::size_t m = weighted.fragments[0].size();
    std::vector<int> scores(m * alphabet.size());
    std::vector<double> counts(alphabet.size());
    for (std::size_t j = 0; j < m; ++j) {
        std::fill(counts.begin(), counts.end(), 0.0);
        for (std::size_t i = 0; i < weighted.fragments.size(); ++i)
            counts[alphabet.indexOrThrow(weighted.fragments[i][j])] += weighted.weights[i];
        std::vector<double> posterior = dirichletPosterior(counts, mixture);
        for (std::size_t a = 0; a < alphabet.size(); ++a) {
            if (background[a] <= 0 && posterior[a] > 0)
                throw std::runtime_error(std::string("buildPssm: letter '") + alphabet.letter(a) +
                                         "' has zero background frequency but positive posterior");
            scores[j * alphabet.size() + a] = halfBitScore(posterior[a], background[a]);
        }
    }
    return Pssm{alphabet, m, std::move(scores)};
}

} // namespace fsi
