#pragma once

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsindex/alphabet.hpp"

namespace fsi {

/// Mixture of Dirichlet priors over residue distributions.
struct DirichletMixture {
    struct Component {
        double coefficient;        // mixture weight q_k
        std::vector<double> alpha; // per-letter pseudocount parameters
        double alphaSum;
    };

    std::string name;
    std::vector<Component> components;
    std::size_t alphabetSize = 20;

    void validate() const {
        if (components.empty())
            throw std::invalid_argument("dirichlet mixture: no components");
        double total = 0;
        for (const Component& c : components) {
            if (c.alpha.size() != alphabetSize)
                throw std::invalid_argument("dirichlet mixture: component size mismatch");
            for (double a : c.alpha)
                if (a <= 0) throw std::invalid_argument("dirichlet mixture: non-positive alpha");
            total += c.coefficient;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("dirichlet mixture: coefficients do not sum to 1");
    }

    static DirichletMixture uniform(double alpha = 1.0, std::size_t size = 20) {
        DirichletMixture m;
        m.name = "uniform";
        m.alphabetSize = size;
        Component c;
        c.coefficient = 1.0;
        c.alpha.assign(size, alpha);
        c.alphaSum = alpha * static_cast<double>(size);
        m.components.push_back(std::move(c));
        return m;
    }
};

// UCSC .comp files list alphas in alphabetical one-letter order.
inline constexpr std::string_view kUcscAminoOrder = "ACDEFGHIKLMNPQRSTVWY";

/// Parses the UCSC plain-text mixture format: one "Mixture=" coefficient and
/// one "Alpha=" line per component.  The first Alpha value is the component
/// total when 21 numbers are present.  Letter order is remapped from the
/// UCSC alphabetical convention to the standard matrix order.
inline DirichletMixture loadDirichletMixture(std::istream& in, const std::string& name = "") {
    DirichletMixture m;
    m.name = name;
    DirichletMixture::Component cur;
    bool haveMixture = false;
    std::string line;
    auto valueOf = [](const std::string& s, std::size_t eq) {
        return s.substr(eq + 1);
    };
    while (std::getline(in, line)) {
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        if (key == "Mixture") {
            cur.coefficient = std::stod(valueOf(line, eq));
            haveMixture = true;
        } else if (key == "Alpha") {
            std::istringstream vs(valueOf(line, eq));
            std::vector<double> vals;
            double v;
            while (vs >> v) vals.push_back(v);
            std::vector<double> ucsc;
            if (vals.size() == 21) {
                ucsc.assign(vals.begin() + 1, vals.end());
            } else if (vals.size() == 20) {
                ucsc = vals;
            } else {
                throw std::runtime_error("dirichlet mixture '" + name + "': Alpha line needs 20 or 21 values");
            }
            if (!haveMixture)
                throw std::runtime_error("dirichlet mixture '" + name + "': Alpha before Mixture");
            cur.alpha.assign(20, 0.0);
            for (std::size_t i = 0; i < 20; ++i) {
                int idx = Alphabet::standard().indexOf(kUcscAminoOrder[i]);
                cur.alpha[static_cast<std::size_t>(idx)] = ucsc[i];
            }
            cur.alphaSum = 0;
            for (double a : cur.alpha) cur.alphaSum += a;
            m.components.push_back(cur);
            cur = {};
            haveMixture = false;
        }
    }
    m.validate();
    return m;
}

/// Posterior mean residue distribution given weighted observed counts, per
/// Sjolander-style Dirichlet-mixture pseudocounts: component responsibilities
/// from the Dirichlet-multinomial marginal, then the mixed posterior mean
/// (n_a + alpha_a) / (N + |alpha|).
inline std::vector<double> dirichletPosterior(const std::vector<double>& counts,
                                              const DirichletMixture& mixture) {
    mixture.validate();
    if (counts.size() != mixture.alphabetSize)
        throw std::invalid_argument("dirichletPosterior: count vector size mismatch");
    for (double c : counts)
        if (c < 0) throw std::invalid_argument("dirichletPosterior: negative count");
    double total = 0;
    for (double c : counts) total += c;

    // log P(counts | component k), up to a shared multinomial factor
    std::vector<double> logLik(mixture.components.size());
    for (std::size_t k = 0; k < mixture.components.size(); ++k) {
        const auto& comp = mixture.components[k];
        double ll = std::lgamma(comp.alphaSum) - std::lgamma(total + comp.alphaSum);
        for (std::size_t a = 0; a < counts.size(); ++a)
            ll += std::lgamma(counts[a] + comp.alpha[a]) - std::lgamma(comp.alpha[a]);
        logLik[k] = ll + std::log(comp.coefficient);
    }
    double peak = *std::max_element(logLik.begin(), logLik.end());
    std::vector<double> resp(logLik.size());
    double respSum = 0;
    for (std::size_t k = 0; k < logLik.size(); ++k) {
        resp[k] = std::exp(logLik[k] - peak);
        respSum += resp[k];
    }

    std::vector<double> posterior(counts.size(), 0.0);
    for (std::size_t k = 0; k < mixture.components.size(); ++k) {
        const auto& comp = mixture.components[k];
        double w = resp[k] / respSum;
        for (std::size_t a = 0; a < counts.size(); ++a)
            posterior[a] += w * (counts[a] + comp.alpha[a]) / (total + comp.alphaSum);
    }
    return posterior;
}

} // namespace fsi
