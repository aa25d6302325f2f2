#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>
#include <sstream>

#include "fsindex/pssm.hpp"
#include "fsindex/score_matrix.hpp"
#include "test_util.hpp"

using namespace fsi;
using testutil::blosum62;
using testutil::blosum62Metric;
using testutil::loadMatrixFile;

TEST_CASE("standard alphabet round-trips indices") {
    const Alphabet& a = Alphabet::standard();
    REQUIRE(a.size() == 20);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a.indexOf(a.letter(i)) == static_cast<int>(i));
    CHECK_FALSE(a.contains('B'));
    CHECK_FALSE(a.contains('X'));
    CHECK_FALSE(a.contains('U'));
    CHECK_THROWS(Alphabet{"AAC"});
}

TEST_CASE("BLOSUM62 text restricts to the standard 20 letters") {
    const ScoreMatrix& m = blosum62();
    REQUIRE(m.alphabet() == Alphabet::standard());
    CHECK(m.at('T', 'T') == 5);
    CHECK(m.at('I', 'V') == 3);
    CHECK(m.at('W', 'W') == 11);
    CHECK(m.at('S', 'S') == 4);
    CHECK(m.symmetric());
}

TEST_CASE("matrix missing a standard letter is rejected") {
    // strip the W row and column out of the canonical file
    std::istringstream in(testutil::readFile(testutil::dataPath("matrices/BLOSUM62")));
    std::string line, mangled;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ls >> tok) toks.push_back(tok);
        bool header = !toks.empty() && toks[0] == "A";
        std::size_t wcol = 18; // W's position among the 24 header letters
        if (header) {
            std::string out;
            for (std::size_t i = 0; i < toks.size(); ++i)
                if (i != wcol) out += toks[i] + " ";
            mangled += out + "\n";
        } else {
            if (toks[0] == "W") continue;
            std::string out;
            for (std::size_t i = 0; i < toks.size(); ++i)
                if (i != wcol + 1) out += toks[i] + " ";
            mangled += out + "\n";
        }
    }
    CHECK_THROWS_WITH(loadScoreMatrix(mangled, "no-W"), Catch::Matchers::ContainsSubstring("W"));
}

static const char* kDnaMatrix =
    "   A  C  G  T\n"
    "A  5 -4 -4 -4\n"
    "C -4  5 -4 -4\n"
    "G -4 -4  5 -4\n"
    "T -4 -4 -4  5\n";

TEST_CASE("DNA match/mismatch matrix keeps its own alphabet") {
    ScoreMatrix dna = loadScoreMatrix(kDnaMatrix, "dna-blast");
    REQUIRE(dna.alphabet().letters() == "ACGT");
    CHECK(dna.at('A', 'A') == 5);
    CHECK(dna.at('A', 'C') == -4);

    QuasiMetric q = toQuasiMetric(dna);
    for (char a : std::string("ACGT"))
        for (char b : std::string("ACGT"))
            CHECK(q.dist(a, b) == (a == b ? 0 : 9));
}

TEST_CASE("BLOSUM62 quasi-metric spot values") {
    const QuasiMetric& q = blosum62Metric();
    CHECK(q.dist('T', 'S') == 3);
    CHECK(q.dist('S', 'T') == 4);
    CHECK(q.dist('I', 'V') == 1);
    CHECK(q.dist('V', 'I') == 1);
    CHECK(q.dist('W', 'T') == 7);
    CHECK(q.dist('T', 'W') == 13);
    for (std::size_t a = 0; a < 20; ++a) {
        CHECK(q.dist(a, a) == 0);
        CHECK(q.coWeight(a) == blosum62().at(a, a));
        for (std::size_t b = 0; b < 20; ++b)
            CHECK(q.dist(a, b) >= 0);
    }
}

TEST_CASE("the full derived BLOSUM62 quasi-metric") {
    // all 400 distances, rows/columns in the order TSANIVLMKRDEQWFYHGPC
    static const char* kOrder = "TSANIVLMKRDEQWFYHGPC";
    static const int kExpected[20][20] = {
        {0, 3, 4, 6, 5, 4, 5, 6, 6, 6, 7, 6, 6, 13, 8, 9, 10, 8, 8, 10},
        {4, 0, 3, 5, 6, 6, 6, 6, 5, 6, 6, 5, 5, 14, 8, 9, 9, 6, 8, 10},
        {5, 3, 0, 8, 5, 4, 5, 6, 6, 6, 8, 6, 6, 14, 8, 9, 10, 6, 8, 9},
        {5, 3, 6, 0, 7, 7, 7, 7, 5, 5, 5, 5, 5, 15, 9, 9, 7, 6, 9, 12},
        {6, 6, 5, 9, 0, 1, 2, 4, 8, 8, 9, 8, 8, 14, 6, 8, 11, 10, 10, 10},
        {5, 6, 4, 9, 1, 0, 3, 4, 7, 8, 9, 7, 7, 14, 7, 8, 11, 9, 9, 10},
        {6, 6, 5, 9, 2, 3, 0, 3, 7, 7, 10, 8, 7, 13, 6, 8, 11, 10, 10, 10},
        {6, 5, 5, 8, 3, 3, 2, 0, 6, 6, 9, 7, 5, 12, 6, 8, 10, 9, 9, 10},
        {6, 4, 5, 6, 7, 6, 6, 6, 0, 3, 7, 4, 4, 14, 9, 9, 9, 8, 8, 12},
        {6, 5, 5, 6, 7, 7, 6, 6, 3, 0, 8, 5, 4, 14, 9, 9, 8, 8, 9, 12},
        {6, 4, 6, 5, 7, 7, 8, 8, 6, 7, 0, 3, 5, 15, 9, 10, 9, 7, 8, 12},
        {6, 4, 5, 6, 7, 6, 7, 7, 4, 5, 4, 0, 3, 14, 9, 9, 8, 8, 8, 13},
        {6, 4, 5, 6, 7, 6, 6, 5, 4, 4, 6, 3, 0, 13, 9, 8, 8, 8, 8, 12},
        {7, 7, 7, 10, 7, 7, 6, 6, 8, 8, 10, 8, 7, 0, 5, 5, 10, 8, 11, 11},
        {7, 6, 6, 9, 4, 5, 4, 5, 8, 8, 9, 8, 8, 10, 0, 4, 9, 9, 11, 11},
        {7, 6, 6, 8, 5, 5, 5, 6, 7, 7, 9, 7, 6, 9, 3, 0, 6, 9, 10, 11},
        {7, 5, 6, 5, 7, 7, 7, 7, 6, 5, 7, 5, 5, 13, 7, 5, 0, 8, 9, 12},
        {7, 4, 4, 6, 8, 7, 8, 8, 7, 7, 7, 7, 7, 13, 9, 10, 10, 0, 9, 12},
        {6, 5, 5, 8, 7, 6, 7, 7, 6, 7, 7, 6, 6, 15, 10, 10, 10, 8, 0, 12},
        {6, 5, 4, 9, 5, 5, 5, 6, 8, 8, 9, 9, 8, 13, 8, 9, 11, 9, 10, 0},
    };
    const QuasiMetric& q = blosum62Metric();
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 20; ++c) {
            INFO("d(" << kOrder[r] << "," << kOrder[c] << ")");
            CHECK(q.dist(kOrder[r], kOrder[c]) == kExpected[r][c]);
        }
}

TEST_CASE("lemma conditions are enforced with the offending pair named") {
    const char* zeroSelf =
        "   A  C\n"
        "A  0 -1\n"
        "C -1  5\n";
    CHECK_THROWS_WITH(toQuasiMetric(loadScoreMatrix(zeroSelf, "zs")),
                      Catch::Matchers::ContainsSubstring("A"));
    const char* offDiagAboveSelf =
        "   A  C\n"
        "A  2  3\n"
        "C  3  5\n";
    CHECK_THROWS_WITH(toQuasiMetric(loadScoreMatrix(offDiagAboveSelf, "od")),
                      Catch::Matchers::ContainsSubstring("s(A,C)"));
}

TEST_CASE("triangle audit matches the published failure counts") {
    struct Row {
        const char* file;
        std::size_t failures;
    };
    const Row rows[] = {{"BLOSUM62", 0}, {"BLOSUM30", 44}, {"BLOSUM35", 10}, {"BLOSUM40", 6},
                        {"BLOSUM55", 2}, {"BLOSUM70", 2},  {"BLOSUM75", 2}};
    for (const Row& row : rows) {
        auto fails = auditTriangle(toQuasiMetric(loadMatrixFile(row.file)));
        INFO(row.file);
        CHECK(fails.size() == row.failures);
        for (const TriangleFailure& f : fails)
            CHECK(f.margin < 0);
    }

    // the one independent BLOSUM55 failure involves I, V and A
    auto fails55 = auditTriangle(toQuasiMetric(loadMatrixFile("BLOSUM55")));
    REQUIRE(fails55.size() == 2);
    for (const TriangleFailure& f : fails55) {
        std::string letters{f.a, f.b, f.c};
        std::sort(letters.begin(), letters.end());
        CHECK(letters == "AIV");
    }
}

TEST_CASE("audit empty iff the derived distance is a quasi-metric on fragments") {
    // exhaustive triangle check over a 3-letter restriction of BLOSUM62
    const ScoreMatrix& b62 = blosum62();
    std::string letters = "ACD";
    std::vector<int> scores;
    for (char a : letters)
        for (char b : letters)
            scores.push_back(b62.at(a, b));
    ScoreMatrix small{Alphabet{letters}, scores, "b62-acd"};
    QuasiMetric q = toQuasiMetric(small);
    REQUIRE(auditTriangle(q).empty());

    for (std::size_t m = 1; m <= 3; ++m) {
        std::vector<std::string> words;
        std::string w(m, ' ');
        std::function<void(std::size_t)> gen = [&](std::size_t pos) {
            if (pos == m) {
                words.push_back(w);
                return;
            }
            for (char c : letters) {
                w[pos] = c;
                gen(pos + 1);
            }
        };
        gen(0);
        for (const auto& x : words)
            for (const auto& y : words) {
                CHECK(fragmentDistance(q, x, y) >= 0);
                if (x == y) CHECK(fragmentDistance(q, x, y) == 0);
                for (const auto& z : words)
                    CHECK(fragmentDistance(q, x, y) + fragmentDistance(q, y, z) >=
                          fragmentDistance(q, x, z));
            }
    }
}

TEST_CASE("fragment distances sum per position") {
    const QuasiMetric& q = blosum62Metric();
    CHECK(fragmentDistance(q, "IV", "VI") == 2);
    CHECK(fragmentDistance(q, "TS", "ST") == 7);
    CHECK(fragmentDistance(q, "ST", "TS") == 7);
    CHECK(fragmentDistance(q, "WWHG", "WWHG") == 0);
    CHECK_THROWS(fragmentDistance(q, "AC", "ACD"));
    CHECK_THROWS(fragmentDistance(q, "AX", "AC"));
}

TEST_CASE("asymmetry identity via co-weights") {
    const QuasiMetric& q = blosum62Metric();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::string x = testutil::randomFragment(q.alphabet(), 9, rng);
        std::string y = testutil::randomFragment(q.alphabet(), 9, rng);
        int lhs = fragmentDistance(q, x, y) - fragmentDistance(q, y, x);
        int rhs = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            rhs += q.coWeight(y[i]) - q.coWeight(x[i]);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("associated metric majorises and symmetrises") {
    const QuasiMetric& q = blosum62Metric();
    QuasiMetric sym = associatedMetric(q);
    for (std::size_t a = 0; a < 20; ++a)
        for (std::size_t b = 0; b < 20; ++b) {
            CHECK(sym.dist(a, b) == sym.dist(b, a));
            CHECK(sym.dist(a, b) >= q.dist(a, b));
        }
}

TEST_CASE("pssm score and valuation") {
    // length-2 pssm, rows {A:2, C:0} over a 2-letter alphabet
    Pssm p{Alphabet{"AC"}, 2, {2, 0, 2, 0}};
    CHECK(pssmScore(p, "AC") == 2);
    CHECK(pssmValuation(p, "AC") == 2);
    CHECK(pssmScore(p, "AA") == 4);
    CHECK(pssmValuation(p, "AA") == 0);
    CHECK_THROWS(pssmScore(p, "A"));

    SECTION("valuation is zero exactly at the per-position argmax") {
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<int> score(-6, 8);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> grid(5 * 20);
            for (int& g : grid) g = score(rng);
            Pssm r{Alphabet::standard(), 5, grid};
            std::string best = r.argmaxString();
            CHECK(pssmValuation(r, best) == 0);
            // any single-position move away from the argmax cannot decrease it
            std::string mutated = best;
            std::uniform_int_distribution<std::size_t> pos(0, 4), letter(0, 19);
            for (int k = 0; k < 20; ++k) {
                std::size_t j = pos(rng);
                mutated[j] = Alphabet::standard().letter(letter(rng));
                CHECK(pssmValuation(r, mutated) >= 0);
                mutated[j] = best[j];
            }
        }
    }
}

TEST_CASE("matrix-replicated pssm valuation equals the letter distance to the query") {
    const QuasiMetric& q = blosum62Metric();
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::string omega = testutil::randomFragment(q.alphabet(), 6, rng);
        Pssm p = Pssm::fromMatrixRows(blosum62(), omega);
        std::string x = testutil::randomFragment(q.alphabet(), 6, rng);
        CHECK(pssmValuation(p, x) == fragmentDistance(q, x, omega));
        CHECK(pssmScore(p, omega) == static_cast<int>(p.maxScoreSum()));
    }
}

TEST_CASE("pssm text round trip") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> score(-9, 13);
    std::vector<int> grid(7 * 20);
    for (int& g : grid) g = score(rng);
    Pssm p{Alphabet::standard(), 7, grid};

    std::stringstream ss;
    writePssm(ss, p);
    Pssm back = readPssm(ss);
    REQUIRE(back.length() == p.length());
    for (std::size_t j = 0; j < p.length(); ++j)
        for (std::size_t a = 0; a < 20; ++a)
            CHECK(back.at(j, a) == p.at(j, a));
}
