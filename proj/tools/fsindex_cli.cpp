// Command-line front end: index construction, range/kNN/PSSM searches with
// optional E-value thresholds, benchmarking with oracle verification,
// iterative profile search, triangle audits, and distance-exponent
// estimation.  All randomness is seeded explicitly so identical invocations
// produce byte-identical outputs.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsindex/dist_exponent.hpp"
#include "fsindex/fasta.hpp"
#include "fsindex/fs_index.hpp"
#include "fsindex/index_io.hpp"
#include "fsindex/iterate.hpp"
#include "fsindex/score_dist.hpp"
#include "fsindex/search.hpp"

using namespace fsi;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerification = 3;

std::vector<SequenceRecord> readFasta(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open FASTA file " + path);
    return parseFasta(in);
}

ScoreMatrix readMatrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file " + path);
    std::string name = path.substr(path.find_last_of('/') + 1);
    return loadScoreMatrix(in, name);
}

Pssm readPssmFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open PSSM file " + path);
    return readPssm(in);
}

DirichletMixture readMixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mixture file " + path);
    std::string name = path.substr(path.find_last_of('/') + 1);
    return loadDirichletMixture(in, name);
}

struct LoadedIndex {
    std::unique_ptr<FragmentStore> store; // stable address: the index refers to it
    FsIndex index;
};

LoadedIndex loadIndexWithStore(const std::string& indexPath, const std::string& fastaPath) {
    std::ifstream in(indexPath, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open index file " + indexPath);

    // peek fragment length and alphabet so the store can be rebuilt first
    char magic[4];
    in.read(magic, 4);
    unsigned char vbuf[4];
    in.read(reinterpret_cast<char*>(vbuf), 4);
    unsigned char mbuf[4];
    in.read(reinterpret_cast<char*>(mbuf), 4);
    uint32_t m = mbuf[0] | (mbuf[1] << 8) | (mbuf[2] << 16) | (uint32_t(mbuf[3]) << 24);
    unsigned char abuf[4];
    in.read(reinterpret_cast<char*>(abuf), 4);
    uint32_t alphaSize = abuf[0] | (abuf[1] << 8) | (abuf[2] << 16) | (uint32_t(abuf[3]) << 24);
    if (!in || alphaSize == 0 || alphaSize > 255)
        throw std::runtime_error("index file: corrupt header");
    std::string letters(alphaSize, '\0');
    in.read(letters.data(), alphaSize);
    in.seekg(0);

    LoadedIndex li;
    li.store = std::make_unique<FragmentStore>(readFasta(fastaPath), m, Alphabet{letters});
    li.index = loadIndex(in, *li.store);
    return li;
}

/// Letter probabilities for query generation: background frequencies by
/// default, or a fresh Dirichlet draw per fragment when a mixture is given.
struct FragmentGenerator {
    const Alphabet& alphabet;
    std::vector<double> background;
    const DirichletMixture* mixture = nullptr;

    std::string draw(std::size_t m, std::mt19937_64& rng) const {
        std::vector<double> probs = background;
        if (mixture) {
            if (mixture->alphabetSize != alphabet.size())
                throw std::runtime_error("mixture alphabet size does not match the corpus alphabet");
            std::vector<double> coeffs;
            for (const auto& c : mixture->components) coeffs.push_back(c.coefficient);
            std::discrete_distribution<std::size_t> pickComp(coeffs.begin(), coeffs.end());
            const auto& comp = mixture->components[pickComp(rng)];
            probs.resize(comp.alpha.size());
            double total = 0;
            for (std::size_t a = 0; a < comp.alpha.size(); ++a) {
                std::gamma_distribution<double> g(comp.alpha[a], 1.0);
                probs[a] = g(rng);
                total += probs[a];
            }
            for (double& p : probs) p /= total;
        }
        std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
        std::string s(m, ' ');
        for (char& c : s) c = alphabet.letter(pick(rng));
        return s;
    }
};

void printHits(std::ostream& out, const std::string& queryId, const HitList& hl, const FragmentStore& store,
               bool json) {
    if (json) {
        for (const Hit& h : hl.hits) {
            nlohmann::json row{{"query", queryId},
                               {"record", store.records()[h.ref.record].id},
                               {"offset", h.ref.offset},
                               {"fragment", std::string(store.text(h.ref))},
                               {"distance", h.distance},
                               {"score", h.score}};
            out << row.dump() << "\n";
        }
    } else {
        for (const Hit& h : hl.hits)
            out << queryId << "\t" << store.records()[h.ref.record].id << "\t" << h.ref.offset << "\t"
                << store.text(h.ref) << "\t" << h.distance << "\t" << h.score << "\n";
    }
    std::ostringstream overhead;
    overhead << std::fixed << std::setprecision(4) << hl.stats.accessOverhead(hl.size());
    if (json) {
        nlohmann::json foot{{"query", queryId},           {"stats", true},
                            {"hits", hl.size()},          {"radius", hl.radius},
                            {"bins", hl.stats.binsScanned}, {"fragments", hl.stats.fragmentsScanned},
                            {"residues", hl.stats.residuesScanned}, {"evals", hl.stats.distanceEvals},
                            {"overhead", overhead.str()}};
        out << foot.dump() << "\n";
    } else {
        out << "# stats query=" << queryId << " hits=" << hl.size() << " radius=" << hl.radius
            << " bins=" << hl.stats.binsScanned << " fragments=" << hl.stats.fragmentsScanned
            << " residues=" << hl.stats.residuesScanned << " evals=" << hl.stats.distanceEvals
            << " overhead=" << overhead.str() << "\n";
    }
}

// ---------------------------------------------------------------- build ----

struct BuildArgs {
    std::string fasta, partitions, out, alphabet;
    std::size_t length = 0;
};

int cmdBuild(const BuildArgs& a) {
    Alphabet alpha = a.alphabet.empty() ? Alphabet::standard() : Alphabet{a.alphabet};
    PartitionScheme scheme = parsePartitions(a.partitions, a.length, alpha);
    FragmentStore store{readFasta(a.fasta), a.length, alpha};
    FsIndex ix{store, std::move(scheme)};

    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write index file " + a.out);
    saveIndex(out, ix);

    std::cout << "fragments\t" << ix.size() << "\n";
    std::cout << "bins\t" << ix.binCount() << "\n";
    std::cout << "non_empty_bins\t" << ix.nonEmptyBins() << "\n";
    std::cout << "max_bin_size\t" << ix.maxBinSize() << "\n";
    // histogram over power-of-two size buckets
    std::map<uint64_t, uint64_t> histogram;
    for (uint64_t u = 0; u < ix.binCount(); ++u) {
        uint64_t size = ix.binEnd(u) - ix.binStart(u);
        if (size == 0) continue;
        uint64_t bucket = 1;
        while (bucket < size) bucket <<= 1;
        ++histogram[bucket];
    }
    for (auto [bucket, count] : histogram)
        std::cout << "bins_of_size_le\t" << bucket << "\t" << count << "\n";
    return 0;
}

// --------------------------------------------------------------- search ----

struct SearchArgs {
    std::string index, fasta, matrix, pssm, query, queryFasta, out, survivalOut;
    std::size_t randomCount = 0;
    int range = -1;
    long long knn = 0;
    double evalue = 0;
    bool assocMetric = false;
    bool json = false;
    uint64_t seed = 0;
};

int cmdSearch(const SearchArgs& a) {
    LoadedIndex li = loadIndexWithStore(a.index, a.fasta);
    const FragmentStore& store = *li.store;
    std::size_t m = store.fragLength();

    std::optional<QuasiMetric> metric;
    std::optional<Pssm> pssm;
    if (!a.pssm.empty()) {
        pssm = readPssmFile(a.pssm);
        if (pssm->length() != m)
            throw std::runtime_error("PSSM length does not match index fragment length");
    } else if (!a.matrix.empty()) {
        QuasiMetric q = toQuasiMetric(readMatrix(a.matrix));
        metric = a.assocMetric ? associatedMetric(q) : q;
    } else {
        throw std::runtime_error("search needs --matrix or --pssm");
    }

    std::vector<std::pair<std::string, std::string>> queries; // (id, fragment); empty fragment = pssm
    if (pssm) {
        queries.emplace_back("pssm", "");
    } else if (!a.query.empty()) {
        queries.emplace_back("q0", a.query);
    } else if (!a.queryFasta.empty()) {
        for (const SequenceRecord& rec : readFasta(a.queryFasta)) {
            if (rec.residues.size() != m)
                throw std::runtime_error("query '" + rec.id + "' length != index fragment length");
            queries.emplace_back(rec.id, rec.residues);
        }
    } else if (a.randomCount > 0) {
        std::mt19937_64 rng(a.seed);
        FragmentGenerator gen{store.alphabet(), backgroundFrequencies(store), nullptr};
        for (std::size_t i = 0; i < a.randomCount; ++i)
            queries.emplace_back("r" + std::to_string(i), gen.draw(m, rng));
    } else {
        throw std::runtime_error("search needs --query, --query-fasta or --random");
    }

    std::ofstream fileOut;
    if (!a.out.empty()) {
        fileOut.open(a.out);
        if (!fileOut) throw std::runtime_error("cannot write " + a.out);
    }
    std::ostream& out = a.out.empty() ? std::cout : fileOut;

    std::vector<double> background;
    if (a.evalue > 0)
        background = backgroundFrequencies(store);

    for (const auto& [id, fragment] : queries) {
        QueryMeasure meas = pssm ? QueryMeasure::forPssm(*pssm, id) : QueryMeasure::forFragment(*metric, fragment);
        HitList hl;
        if (a.evalue > 0) {
            ScoreDistribution dist = scoreDistribution(meas, background, store.size());
            if (!a.survivalOut.empty()) {
                std::ofstream sout(a.survivalOut);
                writeSurvival(sout, dist);
            }
            std::optional<int> t = scoreThresholdForEvalue(dist, a.evalue);
            if (!t) {
                out << "# threshold query=" << id << " evalue=" << a.evalue << " unattainable\n";
                continue;
            }
            int eps = static_cast<int>(meas.maxScoreSum() - *t);
            out << "# threshold query=" << id << " evalue=" << a.evalue << " score=" << *t
                << " epsilon=" << eps << "\n";
            hl = rangeSearch(li.index, meas, eps);
        } else if (a.knn > 0) {
            hl = knnSearch(li.index, meas, static_cast<std::size_t>(a.knn));
        } else if (a.range >= 0) {
            hl = rangeSearch(li.index, meas, a.range);
        } else {
            throw std::runtime_error("search needs --range, --knn or --evalue");
        }
        printHits(out, id, hl, store, a.json);
    }
    return 0;
}

// ---------------------------------------------------------------- bench ----

struct BenchArgs {
    std::string index, fasta, matrix, mixture, out;
    std::size_t queries = 5000;
    std::vector<std::size_t> ks{1, 10, 50};
    bool verify = false;
    uint64_t seed = 0;
};

int cmdBench(const BenchArgs& a) {
    LoadedIndex li = loadIndexWithStore(a.index, a.fasta);
    const FragmentStore& store = *li.store;
    QuasiMetric metric = toQuasiMetric(readMatrix(a.matrix));

    std::optional<DirichletMixture> mixture;
    if (!a.mixture.empty()) mixture = readMixture(a.mixture);
    FragmentGenerator gen{store.alphabet(), backgroundFrequencies(store), mixture ? &*mixture : nullptr};

    std::ofstream fileOut;
    if (!a.out.empty()) {
        fileOut.open(a.out);
        if (!fileOut) throw std::runtime_error("cannot write " + a.out);
    }
    std::ostream& out = a.out.empty() ? std::cout : fileOut;

    std::mt19937_64 rng(a.seed);
    out << "query\tk\tradius\tknn_bins\tknn_fragments\tknn_residues\tknn_hits\t"
           "range_bins\trange_fragments\trange_residues\trange_hits\toverhead\tbin_ratio\n";

    struct Agg {
        double bins = 0, fragments = 0, residues = 0, hits = 0, overhead = 0, ratio = 0;
        uint64_t rows = 0;
    } agg;
    const double m = static_cast<double>(store.fragLength());

    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t qi = 0; qi < a.queries; ++qi) {
        std::string omega = gen.draw(store.fragLength(), rng);
        QueryMeasure meas = QueryMeasure::forFragment(metric, omega);
        for (std::size_t k : a.ks) {
            HitList knn = knnSearch(li.index, meas, k);
            HitList range = rangeSearch(li.index, meas, knn.radius);
            if (a.verify) {
                HitList oracleKnn = sequentialScan(store, meas, SearchMode::Knn, static_cast<long long>(k));
                HitList oracleRange = sequentialScan(store, meas, SearchMode::Range, knn.radius);
                auto keys = [](const HitList& hl) {
                    std::set<std::pair<uint64_t, int>> s;
                    for (const Hit& h : hl.hits)
                        s.insert({(uint64_t(h.ref.record) << 32) | h.ref.offset, h.distance});
                    return s;
                };
                if (keys(knn) != keys(oracleKnn) || keys(range) != keys(oracleRange)) {
                    std::cerr << "verification failed for query " << omega << " k=" << k << "\n";
                    return kExitVerification;
                }
            }
            double overhead = range.stats.accessOverhead(range.size());
            double ratio = static_cast<double>(knn.stats.binsScanned) /
                           static_cast<double>(std::max<uint64_t>(range.stats.binsScanned, 1));
            out << omega << "\t" << k << "\t" << knn.radius << "\t" << knn.stats.binsScanned << "\t"
                << knn.stats.fragmentsScanned << "\t" << knn.stats.residuesScanned << "\t" << knn.size()
                << "\t" << range.stats.binsScanned << "\t" << range.stats.fragmentsScanned << "\t"
                << range.stats.residuesScanned << "\t" << range.size() << "\t" << std::fixed
                << std::setprecision(4) << overhead << "\t" << ratio << "\n";
            out.unsetf(std::ios::fixed);
            agg.bins += static_cast<double>(range.stats.binsScanned);
            agg.fragments += static_cast<double>(range.stats.fragmentsScanned);
            agg.residues += static_cast<double>(range.stats.residuesScanned);
            agg.hits += static_cast<double>(range.size());
            agg.overhead += overhead;
            agg.ratio += ratio;
            ++agg.rows;
        }
    }
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    double rows = static_cast<double>(std::max<uint64_t>(agg.rows, 1));
    out << std::fixed << std::setprecision(4);
    out << "# mean_bins " << agg.bins / rows << "\n";
    out << "# mean_fragments " << agg.fragments / rows << "\n";
    // residues actually compared, out of all residues in the scanned fragments
    out << "# residues_scanned_pct "
        << (agg.fragments > 0 ? 100.0 * agg.residues / (m * agg.fragments) : 0.0) << "\n";
    out << "# mean_hits " << agg.hits / rows << "\n";
    out << "# mean_overhead " << agg.overhead / rows << "\n";
    out << "# mean_knn_range_bin_ratio " << agg.ratio / rows << "\n";
    if (a.verify)
        out << "# verify pass\n";
    std::cerr << std::fixed << std::setprecision(3) << "wall_time_s " << elapsed << "\n";
    return 0;
}

// -------------------------------------------------------------- iterate ----

struct IterateArgs {
    std::string index, fasta, matrix, mixture, queryFasta, outDir;
    std::size_t minHits = 30;
    std::size_t iterations = 5;
    std::vector<double> evalues;
};

int cmdIterate(const IterateArgs& a) {
    LoadedIndex li = loadIndexWithStore(a.index, a.fasta);
    const FragmentStore& store = *li.store;
    std::size_t m = store.fragLength();
    QuasiMetric metric = toQuasiMetric(readMatrix(a.matrix));
    DirichletMixture mixture = a.mixture.empty() ? DirichletMixture::uniform() : readMixture(a.mixture);
    std::vector<double> background = backgroundFrequencies(store);

    IterationConfig config;
    config.minHits = a.minHits;
    config.maxIterations = a.iterations;
    if (!a.evalues.empty()) config.evalueSchedule = a.evalues;

    for (const SequenceRecord& rec : readFasta(a.queryFasta)) {
        if (rec.residues.size() < m) {
            std::cerr << "warning: query '" << rec.id << "' is shorter than the fragment length; skipped\n";
            continue;
        }
        for (std::size_t off = 0; off + m <= rec.residues.size(); ++off) {
            std::string window = rec.residues.substr(off, m);
            if (!store.alphabet().containsAll(window)) continue;
            IterationState st = IterationState::forWindow(off, window);
            while (st.active) {
                std::size_t iterNo = st.iteration;
                IterationOutcome outc = iterate(st, li.index, metric, background, mixture, config);
                std::cout << rec.id << "\t" << off << "\t" << iterNo << "\t" << outc.evalueThreshold
                          << "\t" << outc.scoreThreshold << "\t" << outc.epsilon << "\t" << outc.hitCount
                          << "\t" << outc.status << "\n";
            }
            if (st.pssm && !a.outDir.empty()) {
                std::string path = a.outDir + "/" + rec.id + "_w" + std::to_string(off) + ".pssm";
                std::ofstream pout(path);
                if (!pout) throw std::runtime_error("cannot write " + path);
                writePssm(pout, *st.pssm);
            }
        }
    }
    return 0;
}

// -------------------------------------------------------------- distexp ----

struct DistExpArgs {
    std::string generator, metric = "l2", fasta, matrix, cdfOut;
    std::size_t dim = 2, points = 5000, length = 0;
    uint64_t pairBudget = 200000;
    uint64_t seed = 0;
    std::vector<double> candidates;
};

int cmdDistExp(const DistExpArgs& a) {
    std::mt19937_64 rng(a.seed);
    EmpiricalDistanceCdf cdf;

    if (!a.generator.empty()) {
        PointMetric pm = a.metric == "linf"       ? PointMetric::Linf
                         : a.metric == "geodesic" ? PointMetric::Geodesic
                                                  : PointMetric::L2;
        PointCloud pc;
        if (a.generator == "cube")
            pc = generateCube(a.points, a.dim, pm, rng);
        else if (a.generator == "gaussian")
            pc = generateGaussian(a.points, a.dim, rng);
        else if (a.generator == "sphere")
            pc = generateSphere(a.points, a.dim, pm, rng);
        else
            throw std::runtime_error("unknown generator '" + a.generator + "'");
        cdf = sampleDistanceCdf(pc.size(),
                                [&](std::size_t i, std::size_t j) { return pc.distance(i, j); },
                                a.pairBudget, rng);
    } else if (!a.fasta.empty()) {
        if (a.length == 0 || a.matrix.empty())
            throw std::runtime_error("dataset mode needs --length and --matrix");
        FragmentStore store{readFasta(a.fasta), a.length};
        if (store.size() < 2) throw std::runtime_error("dataset has fewer than 2 fragments");
        // the estimators are defined for metrics: use the associated metric
        QuasiMetric assoc = associatedMetric(toQuasiMetric(readMatrix(a.matrix)));
        cdf = sampleDistanceCdf(store.size(),
                                [&](std::size_t i, std::size_t j) {
                                    return static_cast<double>(
                                        fragmentDistance(assoc, store.text(i), store.text(j)));
                                },
                                a.pairBudget, rng);
    } else {
        throw std::runtime_error("distexp needs --generator or --fasta");
    }

    if (!a.cdfOut.empty()) {
        std::ofstream cout_(a.cdfOut);
        if (!cout_) throw std::runtime_error("cannot write " + a.cdfOut);
        for (std::size_t i = 0; i < cdf.r.size(); ++i)
            cout_ << cdf.r[i] << "\t" << cdf.F[i] << "\n";
    }

    std::cout << "points_sampled\t" << cdf.pointsSampled << "\n";
    std::cout << "pairs_evaluated\t" << cdf.pairsEvaluated << "\n";

    MonomialFitOptions opt;
    if (!a.candidates.empty()) opt.candidates = a.candidates;
    MonomialFitDiagnostics diag = estimateMonomialFit(cdf, opt);
    for (const auto& w : diag.windows)
        std::cout << "window\tL=" << w.L << "\tbest_p=" << w.bestExponent << "\terror=" << w.bestError
                  << "\tcoefficient=" << w.coefficient << "\n";
    std::cout << "monomial_estimate\t" << diag.estimate << "\n";

    try {
        std::cout << "loglog_estimate\t" << estimateLogLogSlope(cdf) << "\n";
    } catch (const std::exception& e) {
        std::cout << "loglog_estimate\tdegenerate (" << e.what() << ")\n";
    }
    return 0;
}

// ---------------------------------------------------------------- audit ----

struct AuditArgs {
    std::vector<std::string> matrices;
    bool list = false;
    int near = 0;
};

int cmdAudit(const AuditArgs& a) {
    for (const std::string& path : a.matrices) {
        ScoreMatrix s = readMatrix(path);
        QuasiMetric q = toQuasiMetric(s);
        auto failures = auditTriangle(q);
        std::cout << s.name() << "\tletters=" << s.alphabet().size() << "\tfailures=" << failures.size()
                  << "\n";
        if (a.list || a.near > 0)
            for (const TriangleFailure& f : auditTriangle(q, a.near > 0 ? a.near : 0))
                std::cout << "  " << f.a << "," << f.b << "," << f.c << "\tmargin=" << f.margin << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"similarity search over fixed-length protein fragments"};
    app.require_subcommand(1);
    app.set_config("--config");

    BuildArgs buildArgs;
    auto* build = app.add_subcommand("build", "build an index from a FASTA corpus");
    build->add_option("--fasta", buildArgs.fasta, "sequence corpus")->required();
    build->add_option("--length", buildArgs.length, "fragment length m")->required();
    build->add_option("--partitions", buildArgs.partitions,
                      "per-position letter groups: ',' separates groups, '#' positions")
        ->required();
    build->add_option("--alphabet", buildArgs.alphabet, "residue alphabet (default: standard 20)");
    build->add_option("--out", buildArgs.out, "output index file")->required();

    SearchArgs searchArgs;
    auto* search = app.add_subcommand("search", "range / kNN / E-value / PSSM queries");
    search->add_option("--index", searchArgs.index, "index file")->required();
    search->add_option("--fasta", searchArgs.fasta, "corpus the index was built from")->required();
    search->add_option("--matrix", searchArgs.matrix, "score matrix file");
    search->add_option("--pssm", searchArgs.pssm, "PSSM file (tab-separated text)");
    search->add_option("--query", searchArgs.query, "inline query fragment");
    search->add_option("--query-fasta", searchArgs.queryFasta, "FASTA of query fragments");
    search->add_option("--random", searchArgs.randomCount, "number of random background queries");
    search->add_option("--range", searchArgs.range, "range radius epsilon");
    search->add_option("--knn", searchArgs.knn, "number of nearest neighbours");
    search->add_option("--evalue", searchArgs.evalue, "E-value threshold (converted to a radius)");
    search->add_flag("--assoc-metric", searchArgs.assocMetric, "use the associated (symmetrised) metric");
    search->add_flag("--json", searchArgs.json, "one JSON object per hit");
    search->add_option("--seed", searchArgs.seed, "seed for random queries");
    search->add_option("--out", searchArgs.out, "write hits to a file instead of stdout");
    search->add_option("--survival-out", searchArgs.survivalOut, "dump the score survival function");

    BenchArgs benchArgs;
    auto* bench = app.add_subcommand("bench", "randomized kNN-then-range benchmark");
    bench->add_option("--index", benchArgs.index)->required();
    bench->add_option("--fasta", benchArgs.fasta)->required();
    bench->add_option("--matrix", benchArgs.matrix)->required();
    bench->add_option("--mixture", benchArgs.mixture, "Dirichlet mixture for query generation");
    bench->add_option("--queries", benchArgs.queries, "number of random queries (default 5000)");
    bench->add_option("--knn", benchArgs.ks, "k values, e.g. --knn 1 10 50");
    bench->add_flag("--verify", benchArgs.verify, "check every search against a sequential scan");
    bench->add_option("--seed", benchArgs.seed);
    bench->add_option("--out", benchArgs.out, "write the report to a file");

    IterateArgs iterateArgs;
    auto* iter = app.add_subcommand("iterate", "iterative profile search over query windows");
    iter->add_option("--index", iterateArgs.index)->required();
    iter->add_option("--fasta", iterateArgs.fasta)->required();
    iter->add_option("--matrix", iterateArgs.matrix)->required();
    iter->add_option("--mixture", iterateArgs.mixture, "Dirichlet mixture (default: uniform)");
    iter->add_option("--query-fasta", iterateArgs.queryFasta, "query protein sequences")->required();
    iter->add_option("--min-hits", iterateArgs.minHits, "hits needed to continue (default 30)");
    iter->add_option("--iterations", iterateArgs.iterations, "maximum iterations (default 5)");
    iter->add_option("--evalues", iterateArgs.evalues, "E-value schedule (default 1 1 0.1 0.1 0.01)");
    iter->add_option("--out-dir", iterateArgs.outDir, "directory for final PSSM files");

    DistExpArgs distArgs;
    auto* dist = app.add_subcommand("distexp", "distance-exponent estimation");
    dist->add_option("--generator", distArgs.generator, "cube | gaussian | sphere");
    dist->add_option("--dim", distArgs.dim, "generator dimension");
    dist->add_option("--points", distArgs.points, "generator point count");
    dist->add_option("--metric", distArgs.metric, "l2 | linf | geodesic");
    dist->add_option("--fasta", distArgs.fasta, "dataset mode: sequence corpus");
    dist->add_option("--length", distArgs.length, "dataset mode: fragment length");
    dist->add_option("--matrix", distArgs.matrix, "dataset mode: score matrix");
    dist->add_option("--pair-budget", distArgs.pairBudget, "approximate pair count (default 200000)");
    dist->add_option("--candidates", distArgs.candidates, "candidate exponents (default 1..20)");
    dist->add_option("--seed", distArgs.seed);
    dist->add_option("--cdf-out", distArgs.cdfOut, "dump the empirical cdf");

    AuditArgs auditArgs;
    auto* audit = app.add_subcommand("audit", "triangle-inequality audit of score matrices");
    audit->add_option("matrices", auditArgs.matrices, "matrix files")->required();
    audit->add_flag("--list", auditArgs.list, "list each failing triple with its margin");
    audit->add_option("--near", auditArgs.near,
                      "also list near-failures: triples within this margin of violating");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*build) return cmdBuild(buildArgs);
        if (*search) return cmdSearch(searchArgs);
        if (*bench) return cmdBench(benchArgs);
        if (*iter) return cmdIterate(iterateArgs);
        if (*dist) return cmdDistExp(distArgs);
        if (*audit) return cmdAudit(auditArgs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
