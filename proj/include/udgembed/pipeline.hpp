#pragma once

#include "udgembed/den.hpp"
#include "udgembed/errors.hpp"
#include "udgembed/feasibility.hpp"
#include "udgembed/graph.hpp"
#include "udgembed/hardware.hpp"
#include "udgembed/io.hpp"
#include "udgembed/oracle.hpp"
#include "udgembed/remap.hpp"
#include "udgembed/types.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace udg {

// ---- antenna ingestion --------------------------------------------------

struct AntennaRecord {
    std::string id;
    double x = 0.0; // meters
    double y = 0.0; // meters
};

struct AntennaSet {
    std::vector<AntennaRecord> records;

    Embedding positions() const {
        Embedding out;
        out.reserve(records.size());
        for (const AntennaRecord& r : records) out.push_back({r.x, r.y});
        return out;
    }
};

// Conflict graph from a delimited antenna file (header id,x,y; meters):
// antennas within the conflict radius of each other get an edge. A distance
// exactly equal to the radius counts as a conflict.
inline std::pair<Graph, AntennaSet> ingest_antennas(const std::string& text, double conflict_radius) {
    if (conflict_radius <= 0.0) throw MalformedInputError("conflict radius must be positive");
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw MalformedInputError("empty antenna document");

    const auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream fs(s);
        while (std::getline(fs, field, ',')) {
            const auto b = field.find_first_not_of(" \t\r");
            const auto e = field.find_last_not_of(" \t\r");
            fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
        }
        return fields;
    };

    const std::vector<std::string> header = split(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "x" || header[2] != "y")
        throw MalformedInputError("antenna document must start with header 'id,x,y'");

    AntennaSet set;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> fields = split(line);
        if (fields.size() < 3) throw MalformedInputError("antenna row needs id,x,y: " + line);
        AntennaRecord rec;
        rec.id = fields[0];
        if (!seen.insert(rec.id).second) throw MalformedInputError("duplicate antenna id: " + rec.id);
        try {
            std::size_t used = 0;
            rec.x = std::stod(fields[1], &used);
            if (used != fields[1].size()) throw std::invalid_argument(fields[1]);
            rec.y = std::stod(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument(fields[2]);
        } catch (const std::exception&) {
            throw MalformedInputError("non-numeric antenna coordinate in row: " + line);
        }
        if (!std::isfinite(rec.x) || !std::isfinite(rec.y))
            throw MalformedInputError("antenna coordinates must be finite: " + line);
        set.records.push_back(std::move(rec));
    }
    if (set.records.empty()) throw MalformedInputError("antenna document has no rows");

    const int n = static_cast<int>(set.records.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = set.records[static_cast<std::size_t>(i)].x - set.records[static_cast<std::size_t>(j)].x;
            const double dy = set.records[static_cast<std::size_t>(i)].y - set.records[static_cast<std::size_t>(j)].y;
            if (std::sqrt(dx * dx + dy * dy) <= conflict_radius) edges.emplace_back(i, j);
        }
    }
    return {Graph(n, edges), std::move(set)};
}

// ---- dataset ingestion ---------------------------------------------------

struct DatasetManifest {
    struct Sample {
        std::string id;
        Graph graph;
        std::optional<Embedding> hint;
    };
    std::vector<Sample> samples;
    int n_threshold = 0;
    std::vector<std::pair<std::string, std::string>> skipped; // (id, reason)
};

// Load every edge-list document in a directory, keeping samples with
// n <= n_threshold. Oversized or malformed documents are skipped with a
// recorded reason rather than aborting the scan.
inline DatasetManifest ingest_dataset(const std::filesystem::path& dir, int n_threshold) {
    DatasetManifest manifest;
    manifest.n_threshold = n_threshold;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw MalformedInputError("dataset path is not a readable directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        const std::string id = path.stem().string();
        try {
            Graph g = load_graph(path);
            if (g.n() > n_threshold) {
                manifest.skipped.emplace_back(id, "n too large (" + std::to_string(g.n()) + ")");
                continue;
            }
            manifest.samples.push_back({id, std::move(g), std::nullopt});
        } catch (const MalformedInputError& e) {
            manifest.skipped.emplace_back(id, std::string("malformed: ") + e.what());
        }
    }
    return manifest;
}

// ---- trivial embeddings ---------------------------------------------------

// Rigid placement for a complete graph with 2..7 vertices: the center plus
// k-1 consecutive corners of a regular hexagon, radius picked so that every
// pairwise distance sits inside [d_min, r_b] and the three y-levels satisfy
// the row rule. On trap lattices the wheel is snapped onto traps afterwards.
inline Embedding complete_graph_embedding(int k, const RegisterProfile& profile) {
    if (k < 1 || k > max_embeddable_clique)
        throw GenerationError("no trivial embedding for K" + std::to_string(k));
    const Vec2 offset = register_frame_offset(profile);
    if (k == 1) return {offset};

    double r_lo = profile.d_min;
    if (profile.row_spacing) r_lo = std::max(r_lo, *profile.row_spacing * 2.0 / std::sqrt(3.0));
    const double r_hi = profile.r_b / 2.0;
    if (r_lo > r_hi)
        throw GenerationError("register constraints leave no room for a K" + std::to_string(k) + " wheel");
    const double radius = 0.5 * (r_lo + r_hi);

    Embedding wheel{{0.0, 0.0}};
    for (int i = 0; i + 1 < k; ++i) {
        const double theta = two_pi * i / 6.0;
        wheel.push_back({radius * std::cos(theta), radius * std::sin(theta)});
    }

    Graph complete = [&] {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) edges.emplace_back(i, j);
        return Graph(k, edges);
    }();

    Embedding placed;
    if (const auto* lattice = profile.lattice()) {
        placed = remap(wheel, complete, *lattice);
    } else {
        placed = wheel;
        for (Vec2& c : placed) c = c + offset;
    }
    const FeasibilityReport rep = check(placed, complete, profile);
    if (!rep.feasible())
        throw GenerationError("trivial K" + std::to_string(k) + " embedding failed validation");
    return placed;
}

// ---- per-sample orchestration ---------------------------------------------

struct PipelineConfig {
    TrainConfig train;
    double elf_margin = 0.1;
    double w_min = 1.0;
    double w_max = 1.0;
    double w_row = 1.0;
    int workers = 1;
    double sample_budget_s = 300.0;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> out_dir; // per-sample documents, written atomically
};

struct ComponentOutcome {
    enum class Kind { isolated, complete, trained };
    Kind kind = Kind::isolated;
    std::vector<int> to_global;
    Embedding embedding; // register frame
    FeasibilityReport report;
    bool feasible = false;
    int iterations = 0;
    std::string error;
};

struct SampleOutcome {
    std::string id;
    int n = 0;
    bool feasible = false;
    double gap = std::numeric_limits<double>::infinity(); // min finite component gap
    long iterations = 0;
    double wall_time_s = 0.0;
    std::string error;
    std::vector<ComponentOutcome> components;
};

struct BatchReport {
    std::vector<SampleOutcome> samples;

    struct Bucket {
        int total = 0;
        int feasible = 0;
    };
    std::map<int, Bucket> success_by_n;
    std::map<int, std::vector<double>> gaps_by_n; // finite gaps of feasible samples
};

// Decompose -> classify trivial components -> precheck/train general
// components (with the lattice remap on trap registers) -> verify. Failures
// are captured in the outcome, never thrown.
inline SampleOutcome run_sample(const std::string& id, const Graph& g, const RegisterProfile& profile,
                                const PipelineConfig& cfg, std::uint64_t sample_seed,
                                const std::optional<Embedding>& hint = std::nullopt) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    SampleOutcome out;
    out.id = id;
    out.n = g.n();
    out.feasible = true;

    const ElfConfig elf_cfg = make_elf_config(profile, cfg.elf_margin, cfg.w_min, cfg.w_max, cfg.w_row);
    const ComponentDecomposition parts = decompose(g);

    const auto finish_component = [&](ComponentOutcome&& comp) {
        if (!comp.feasible) out.feasible = false;
        if (comp.feasible && std::isfinite(comp.report.gap)) out.gap = std::min(out.gap, comp.report.gap);
        out.iterations += comp.iterations;
        out.components.push_back(std::move(comp));
    };

    for (int v : parts.isolated) {
        ComponentOutcome comp;
        comp.kind = ComponentOutcome::Kind::isolated;
        comp.to_global = {v};
        comp.embedding = complete_graph_embedding(1, profile);
        comp.report = check(comp.embedding, Graph(1, {}), profile);
        comp.feasible = comp.report.feasible();
        finish_component(std::move(comp));
    }

    for (const std::vector<int>& vertices : parts.complete) {
        ComponentOutcome comp;
        comp.kind = ComponentOutcome::Kind::complete;
        comp.to_global = vertices;
        const int k = static_cast<int>(vertices.size());
        try {
            if (k > max_embeddable_clique) throw PrecheckError("complete component exceeds K7");
            comp.embedding = complete_graph_embedding(k, profile);
            std::vector<std::pair<int, int>> edges;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) edges.emplace_back(i, j);
            comp.report = check(comp.embedding, Graph(k, edges), profile);
            comp.feasible = comp.report.feasible();
        } catch (const std::exception& e) {
            comp.feasible = false;
            comp.error = e.what();
        }
        finish_component(std::move(comp));
    }

    int general_index = 0;
    for (const GeneralComponent& part : parts.general) {
        ComponentOutcome comp;
        comp.kind = ComponentOutcome::Kind::trained;
        comp.to_global = part.to_global;
        const std::uint64_t comp_seed = derive_seed(sample_seed, static_cast<std::uint64_t>(general_index++));
        try {
            const double remaining =
                cfg.sample_budget_s > 0.0 ? cfg.sample_budget_s - elapsed() : 0.0;
            if (cfg.sample_budget_s > 0.0 && remaining <= 0.0) throw GenerationError("sample budget exhausted");

            std::optional<Embedding> comp_hint;
            if (hint) {
                Embedding h;
                h.reserve(part.to_global.size());
                for (int v : part.to_global) h.push_back((*hint)[static_cast<std::size_t>(v)]);
                comp_hint = std::move(h);
            }

            TrainConfig tc = cfg.train;
            tc.rng_seed = comp_seed;
            tc.wall_clock_budget_s = cfg.sample_budget_s > 0.0
                                         ? (tc.wall_clock_budget_s > 0.0 ? std::min(tc.wall_clock_budget_s, remaining)
                                                                         : remaining)
                                         : tc.wall_clock_budget_s;

            const Embedding initial = initial_solution(part.graph, profile, comp_hint, comp_seed);
            TrainReport trained = train(part.graph, initial, profile, tc, elf_cfg);
            comp.iterations = trained.iterations_used;

            if (const auto* lattice = profile.lattice()) {
                if (!trained.feasible) {
                    comp.embedding = trained.final_embedding;
                    comp.report = trained.final_check;
                    comp.feasible = false;
                } else {
                    comp.embedding = remap(trained.final_embedding, part.graph, *lattice);
                    comp.report = post_remap_metrics(comp.embedding, part.graph, profile);
                    comp.feasible = comp.report.feasible();
                }
            } else {
                comp.embedding = trained.final_embedding;
                comp.report = trained.final_check;
                comp.feasible = trained.feasible;
            }
        } catch (const std::exception& e) {
            comp.feasible = false;
            comp.error = e.what();
        }
        finish_component(std::move(comp));
    }

    out.wall_time_s = elapsed();
    if (cfg.sample_budget_s > 0.0 && out.wall_time_s > cfg.sample_budget_s) {
        out.feasible = false;
        if (out.error.empty()) out.error = "timeout";
    }
    for (const ComponentOutcome& comp : out.components) {
        if (!comp.error.empty() && out.error.empty()) out.error = comp.error;
    }
    return out;
}

inline json sample_outcome_to_json(const SampleOutcome& s) {
    json comps = json::array();
    for (const ComponentOutcome& c : s.components) {
        const char* kind = c.kind == ComponentOutcome::Kind::isolated    ? "isolated"
                           : c.kind == ComponentOutcome::Kind::complete ? "complete"
                                                                        : "trained";
        comps.push_back(json{{"kind", kind},
                             {"vertices", c.to_global},
                             {"coords", embedding_to_json(c.embedding)},
                             {"feasible", c.feasible},
                             {"iterations", c.iterations},
                             {"gap", io_detail::finite_or_null(c.report.gap)},
                             {"error", c.error}});
    }
    return json{{"id", s.id},
                {"n", s.n},
                {"feasible", s.feasible},
                {"gap", io_detail::finite_or_null(s.gap)},
                {"iterations", s.iterations},
                {"wall_time_s", s.wall_time_s},
                {"error", s.error},
                {"components", std::move(comps)}};
}

inline SampleOutcome sample_outcome_from_json(const json& doc) {
    SampleOutcome s;
    s.id = doc.value("id", "");
    s.n = doc.value("n", 0);
    s.feasible = doc.value("feasible", false);
    s.gap = doc.contains("gap") && doc["gap"].is_number() ? doc["gap"].get<double>()
                                                          : std::numeric_limits<double>::infinity();
    s.iterations = doc.value("iterations", 0L);
    s.wall_time_s = doc.value("wall_time_s", 0.0);
    s.error = doc.value("error", "");
    return s;
}

inline void aggregate(BatchReport& report) {
    report.success_by_n.clear();
    report.gaps_by_n.clear();
    for (const SampleOutcome& s : report.samples) {
        BatchReport::Bucket& bucket = report.success_by_n[s.n];
        ++bucket.total;
        if (s.feasible) {
            ++bucket.feasible;
            if (std::isfinite(s.gap)) report.gaps_by_n[s.n].push_back(s.gap);
        }
    }
    for (auto& [n, gaps] : report.gaps_by_n) std::sort(gaps.begin(), gaps.end());
}

// Run every sample in the manifest, optionally across a worker pool. Results
// are deterministic regardless of worker count: each sample draws from its
// own seed stream and lands at its manifest position.
inline BatchReport run_pipeline(const DatasetManifest& manifest, const RegisterProfile& profile,
                                const PipelineConfig& cfg) {
    BatchReport report;
    report.samples.resize(manifest.samples.size());

    std::mutex io_mutex;
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < manifest.samples.size(); i = next.fetch_add(1)) {
            const auto& sample = manifest.samples[i];
            SampleOutcome outcome = run_sample(sample.id, sample.graph, profile, cfg,
                                               derive_seed(cfg.seed, i), sample.hint);
            if (cfg.out_dir) {
                const json doc = sample_outcome_to_json(outcome);
                std::lock_guard<std::mutex> lock(io_mutex);
                atomic_write_file(*cfg.out_dir / (sample.id + ".json"), doc.dump(2) + "\n");
            }
            report.samples[i] = std::move(outcome);
        }
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1 || manifest.samples.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }

    aggregate(report);
    return report;
}

inline json batch_report_to_json(const BatchReport& report) {
    json samples = json::array();
    for (const SampleOutcome& s : report.samples) samples.push_back(sample_outcome_to_json(s));

    json success = json::array();
    for (const auto& [n, bucket] : report.success_by_n) {
        success.push_back(json{{"n", n}, {"total", bucket.total}, {"feasible", bucket.feasible}});
    }

    const auto quantile = [](const std::vector<double>& sorted, double q) {
        if (sorted.empty()) return 0.0;
        const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };

    json gaps = json::array();
    for (const auto& [n, values] : report.gaps_by_n) {
        gaps.push_back(json{{"n", n},
                            {"count", values.size()},
                            {"min", values.front()},
                            {"q1", quantile(values, 0.25)},
                            {"median", quantile(values, 0.5)},
                            {"q3", quantile(values, 0.75)},
                            {"max", values.back()}});
    }

    return json{{"samples", std::move(samples)},
                {"success_by_n", std::move(success)},
                {"gap_by_n", std::move(gaps)}};
}

} // namespace udg
