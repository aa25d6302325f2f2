#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>

#include "fsindex/iterate.hpp"
#include "fsindex/profile_build.hpp"
#include "test_util.hpp"

using namespace fsi;
using testutil::blosum62Metric;

TEST_CASE("henikoff position-based weights") {
    SECTION("identical fragments weigh one each") {
        WeightedHitSet w = henikoffWeights({"ILV", "ILV", "ILV"});
        for (double wi : w.weights)
            CHECK(wi == Catch::Approx(1.0));
        CHECK(w.totalWeight() == Catch::Approx(3.0));
    }
    SECTION("the single-position textbook case") {
        WeightedHitSet w = henikoffWeights({"A", "A", "C"});
        CHECK(w.weights[0] == Catch::Approx(0.75));
        CHECK(w.weights[1] == Catch::Approx(0.75));
        CHECK(w.weights[2] == Catch::Approx(1.5));
    }
    SECTION("all-distinct letters weigh equally") {
        WeightedHitSet w = henikoffWeights({"A", "C", "D", "W"});
        for (double wi : w.weights)
            CHECK(wi == Catch::Approx(1.0));
    }
    SECTION("permutation equivariance and weight preservation") {
        std::mt19937_64 rng(103);
        std::vector<std::string> hits;
        for (int i = 0; i < 12; ++i)
            hits.push_back(testutil::randomFragment(Alphabet::standard(), 5, rng));
        WeightedHitSet w = henikoffWeights(hits);
        CHECK(w.totalWeight() == Catch::Approx(12.0).epsilon(1e-9));

        std::vector<std::string> shuffled = hits;
        std::reverse(shuffled.begin(), shuffled.end());
        WeightedHitSet w2 = henikoffWeights(shuffled);
        for (std::size_t i = 0; i < hits.size(); ++i)
            CHECK(w.weights[i] == Catch::Approx(w2.weights[hits.size() - 1 - i]));
    }
    CHECK_THROWS(henikoffWeights({}));
    CHECK_THROWS(henikoffWeights({"AC", "ACD"}));
}

TEST_CASE("dirichlet posterior") {
    DirichletMixture uniform = DirichletMixture::uniform();

    SECTION("zero counts give the uniform distribution") {
        auto post = dirichletPosterior(std::vector<double>(20, 0.0), uniform);
        for (double p : post)
            CHECK(p == Catch::Approx(1.0 / 20.0));
    }
    SECTION("closed-form pseudocounts for a single component") {
        std::vector<double> counts(20, 0.0);
        counts[0] = 10.0; // letter A
        auto post = dirichletPosterior(counts, uniform);
        CHECK(post[0] == Catch::Approx(11.0 / 30.0));
        for (std::size_t a = 1; a < 20; ++a)
            CHECK(post[a] == Catch::Approx(1.0 / 30.0));
    }
    SECTION("posterior approaches observed frequencies as counts grow") {
        std::mt19937_64 rng(107);
        std::vector<double> comp(20);
        double total = 0;
        std::uniform_real_distribution<double> u(0.5, 2.0);
        for (double& c : comp) {
            c = u(rng);
            total += c;
        }
        for (double& c : comp) c /= total;
        std::vector<double> counts(20);
        for (std::size_t a = 0; a < 20; ++a)
            counts[a] = comp[a] * 1e6;
        auto post = dirichletPosterior(counts, uniform);
        for (std::size_t a = 0; a < 20; ++a)
            CHECK(std::abs(post[a] - comp[a]) <= 1e-4);
    }
    SECTION("posterior is continuous in the counts") {
        std::mt19937_64 rng(211);
        std::uniform_real_distribution<double> u(0.0, 20.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> counts(20);
            for (double& c : counts) c = u(rng);
            auto base = dirichletPosterior(counts, uniform);
            std::vector<double> nudged = counts;
            nudged[trial % 20] += 1e-7;
            auto moved = dirichletPosterior(nudged, uniform);
            for (std::size_t a = 0; a < 20; ++a)
                CHECK(std::abs(base[a] - moved[a]) < 1e-6);
        }
    }
    SECTION("output is a distribution for any non-negative input") {
        std::mt19937_64 rng(109);
        std::uniform_real_distribution<double> u(0.0, 50.0);
        DirichletMixture two;
        two.components.push_back({0.3, std::vector<double>(20, 0.6), 12.0});
        two.components.push_back({0.7, std::vector<double>(20, 2.0), 40.0});
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> counts(20);
            for (double& c : counts) c = u(rng);
            auto post = dirichletPosterior(counts, two);
            double sum = 0;
            for (double p : post) {
                CHECK(p >= 0);
                sum += p;
            }
            CHECK(sum == Catch::Approx(1.0).epsilon(1e-9));
        }
    }
    CHECK_THROWS(dirichletPosterior(std::vector<double>(20, -1.0), uniform));
}

TEST_CASE("ucsc mixture file parsing") {
    std::ifstream in(testutil::dataPath("dirichlet/uniform.comp"));
    REQUIRE(in);
    DirichletMixture m = loadDirichletMixture(in, "uniform.comp");
    REQUIRE(m.components.size() == 1);
    CHECK(m.components[0].coefficient == Catch::Approx(1.0));
    CHECK(m.components[0].alphaSum == Catch::Approx(20.0));
    for (double a : m.components[0].alpha)
        CHECK(a == Catch::Approx(1.0));
}

TEST_CASE("pssm construction from weighted hits") {
    DirichletMixture uniform = DirichletMixture::uniform();
    std::vector<double> background(20, 1.0 / 20.0);

    SECTION("posterior equal to background scores zero everywhere") {
        // zero observed counts with a uniform prior and uniform background
        WeightedHitSet w;
        w.fragments = {"AC"};
        w.weights = {0.0};
        Pssm p = buildPssm(w, background, uniform);
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t a = 0; a < 20; ++a)
                CHECK(p.at(j, a) == 0);
    }
    SECTION("a four-fold enriched letter scores four half-bits") {
        CHECK(halfBitScore(4.0 / 20.0, 1.0 / 20.0) == 4);
        CHECK(halfBitScore(1.0 / 20.0, 4.0 / 20.0) == -4);
    }
    SECTION("rounding is symmetric about zero") {
        CHECK(halfBitScore(std::pow(2.0, 0.30) / 20.0, 1.0 / 20.0) == 1);  // 0.6 half-bits
        CHECK(halfBitScore(std::pow(2.0, -0.30) / 20.0, 1.0 / 20.0) == -1);
        CHECK(halfBitScore(std::pow(2.0, 0.20) / 20.0, 1.0 / 20.0) == 0);  // 0.4 half-bits
        CHECK(halfBitScore(std::pow(2.0, -0.20) / 20.0, 1.0 / 20.0) == 0);
    }
    SECTION("a large set of exact copies puts the argmax on the motif") {
        std::vector<std::string> hits(200, "WIVKRADETG");
        WeightedHitSet w = henikoffWeights(hits);
        Pssm p = buildPssm(w, background, uniform);
        CHECK(p.argmaxString() == "WIVKRADETG");
    }
    SECTION("an all-zero pssm searches as a full scan") {
        WeightedHitSet w;
        w.fragments = {"ACD"};
        w.weights = {0.0};
        Pssm p = buildPssm(w, background, uniform);
        std::mt19937_64 rng(223);
        auto store = testutil::randomStore(Alphabet::standard(), 150, 3, rng);
        FsIndex ix{store, parsePartitions("TSAN,ILVM,KRDEQ,WFYHGPC", 3)};
        HitList hl = pssmSearch(ix, p, SearchMode::Range, 0);
        CHECK(hl.size() == store.size());
        CHECK(hl.stats.binsScanned == ix.nonEmptyBins());
    }
}

namespace {

/// Synthetic corpus with noisy copies of a motif planted in background noise.
FragmentStore plantedMotifStore(const std::string& motif, std::size_t copies, std::size_t background,
                                std::size_t maxSubstitutions, std::mt19937_64& rng) {
    std::vector<SequenceRecord> recs;
    std::uniform_int_distribution<std::size_t> pos(0, motif.size() - 1), letter(0, 19), subs(0, maxSubstitutions);
    for (std::size_t i = 0; i < copies; ++i) {
        std::string s = motif;
        std::size_t k = subs(rng);
        for (std::size_t j = 0; j < k; ++j)
            s[pos(rng)] = Alphabet::standard().letter(letter(rng));
        recs.push_back({"motif" + std::to_string(i), "", s});
    }
    for (std::size_t i = 0; i < background; ++i)
        recs.push_back({"bg" + std::to_string(i), "", testutil::randomFragment(Alphabet::standard(), motif.size(), rng)});
    return FragmentStore{std::move(recs), motif.size()};
}

} // namespace

TEST_CASE("iteration driver") {
    std::mt19937_64 rng(113);
    const std::string motif = "WIVKRADET";
    FragmentStore store = plantedMotifStore(motif, 50, 5000, 2, rng);
    FsIndex ix{store, parsePartitions("TSAN,ILVM,KR,DEQ,WFYH,GPC", 9)};
    auto background = backgroundFrequencies(store);
    DirichletMixture mixture = DirichletMixture::uniform();
    IterationConfig config;
    config.maxIterations = 4;

    SECTION("the motif window stays active and recovers the motif") {
        IterationState st = IterationState::forWindow(0, motif);
        std::size_t iterations = 0;
        while (st.active) {
            IterationOutcome out = iterate(st, ix, blosum62Metric(), background, mixture, config);
            ++iterations;
            INFO("iteration " << iterations << " status " << out.status << " hits " << out.hitCount);
            if (iterations == 1) {
                CHECK(out.evalueThreshold == 1.0);
                CHECK(out.hitCount >= 30);
            }
            if (iterations == 2)
                CHECK(out.evalueThreshold == 1.0); // schedule: 1.0 again
            REQUIRE(iterations < 10);
        }
        CHECK(iterations >= 3);
        REQUIRE(st.pssm.has_value());
        CHECK(st.pssm->argmaxString() == motif);
    }

    SECTION("a window with no significant hits deactivates immediately") {
        // an isolated random window: nothing within E=1.0 except itself
        IterationState st = IterationState::forWindow(0, "WWWWWWWWW");
        IterationOutcome out = iterate(st, ix, blosum62Metric(), background, mixture, config);
        CHECK(out.status == "deactivated");
        CHECK_FALSE(st.active);
        CHECK(out.hitCount < 30);
        CHECK_THROWS(iterate(st, ix, blosum62Metric(), background, mixture, config));
    }

    SECTION("the hit prefilter hook drops fragments before profile construction") {
        IterationConfig filtered = config;
        filtered.hitPrefilter = [](std::string_view) { return false; }; // reject everything
        IterationState st = IterationState::forWindow(0, motif);
        IterationOutcome out = iterate(st, ix, blosum62Metric(), background, mixture, filtered);
        CHECK(out.status == "deactivated"); // enough raw hits, none surviving the filter
        CHECK(out.hitCount >= 30);
        CHECK_FALSE(st.pssm.has_value());
    }

    SECTION("identical consecutive hit sets report convergence") {
        IterationState st = IterationState::forWindow(0, motif);
        std::string lastStatus;
        while (st.active) {
            IterationConfig frozen;
            frozen.evalueSchedule = {1.0};
            frozen.maxIterations = 50;
            IterationOutcome out = iterate(st, ix, blosum62Metric(), background, mixture, frozen);
            lastStatus = out.status;
            REQUIRE(st.iteration < 50);
        }
        // with a frozen threshold the hit set reaches a fixed point
        CHECK((lastStatus == "converged" || lastStatus == "deactivated"));
        if (lastStatus == "converged")
            CHECK(st.converged);
    }
}
