// gac: command-line front end for graph-based active-contour segmentation.
// Subcommands: gen-graph, ingest-image, segment, validate. Every command
// writes its outputs plus a manifest.json into --out, and reruns with the
// same flags produce byte-identical data files.

#include <CLI11.hpp>
#include <json.hpp>

#include <gac/analytic.hpp>
#include <gac/csv.hpp>
#include <gac/delaunay.hpp>
#include <gac/engine.hpp>
#include <gac/raster.hpp>
#include <gac/validation.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gac;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

void write_manifest(const std::string& dir, const std::string& command, std::uint64_t seed,
                    const json& config, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double wall_ms) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["seed"] = seed;
    m["config"] = config;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["wall_ms"] = wall_ms;
    std::ofstream out((fs::path(dir) / "manifest.json").string());
    if (!out) throw std::runtime_error("cannot write manifest in '" + dir + "'");
    out << m.dump(2) << "\n";
}

std::string path_in(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

// ------------------------------------------------------------- gen-graph ---

int cmd_gen_graph(const std::string& mode, std::optional<std::uint64_t> n_opt, double C,
                  std::uint64_t seed, const std::string& points_path, const std::string& out) {
    Stopwatch sw;
    ensure_dir(out);

    std::vector<Point2> pts;
    std::vector<double> values;
    std::vector<std::string> inputs;
    if (!points_path.empty()) {
        auto [p, v] = read_points_csv(points_path);
        pts = std::move(p);
        values = std::move(v);
        inputs.push_back(points_path);
    } else {
        if (!n_opt) throw std::runtime_error("gen-graph: pass --n or --points");
        pts = sample_uniform_points(*n_opt, unit_square(), seed);
    }

    SpatialGraph g = mode == "rgg" ? build_rgg(pts, rgg_radius(pts.size(), C))
                                   : build_delaunay(pts);

    const auto edge_list = g.edges();
    write_points_csv(path_in(out, "points.csv"), pts, values.empty() ? nullptr : &values);
    write_edges_csv(path_in(out, "edges.csv"), edge_list);

    json cfg{{"mode", mode}, {"C", C}, {"vertex_count", pts.size()},
             {"edge_count", edge_list.size()}};
    if (n_opt) cfg["n"] = *n_opt;
    if (!points_path.empty()) cfg["points"] = points_path;
    write_manifest(out, "gen-graph", seed, cfg, inputs, {"points.csv", "edges.csv"}, sw.ms());
    std::printf("gen-graph: %zu vertices, %zu edges -> %s\n", pts.size(), edge_list.size(),
                out.c_str());
    return 0;
}

// ---------------------------------------------------------- ingest-image ---

int cmd_ingest_image(const std::string& image, const std::string& mode,
                     std::optional<std::uint64_t> n_opt, const std::string& graph_kind, double C,
                     std::uint64_t seed, const std::string& out) {
    Stopwatch sw;
    ensure_dir(out);

    const RasterImage img = load_pgm(image);
    std::vector<std::pair<Point2, double>> verts;
    if (mode == "watershed") {
        if (n_opt) throw std::runtime_error("ingest-image: --n applies to --mode random only");
        const RasterImage gradmag = sobel_gradient_magnitude(img);
        const LabelMap basins = absorb_watershed_lines(watershed_segments(gradmag), gradmag);
        verts = segment_centroids(basins, img);
    } else {
        if (!n_opt) throw std::runtime_error("ingest-image: --mode random requires --n");
        verts = sample_image_random(img, *n_opt, seed);
    }

    std::vector<Point2> pts;
    std::vector<double> values;
    pts.reserve(verts.size());
    values.reserve(verts.size());
    for (const auto& [p, v] : verts) {
        pts.push_back(p);
        values.push_back(v);
    }

    SpatialGraph g = graph_kind == "rgg" ? build_rgg(pts, rgg_radius(pts.size(), C))
                                         : build_delaunay(pts);

    const auto edge_list = g.edges();
    write_points_csv(path_in(out, "points.csv"), pts, &values);
    write_edges_csv(path_in(out, "edges.csv"), edge_list);

    const json cfg{{"image", image},    {"mode", mode},
                   {"graph", graph_kind}, {"C", C},
                   {"n", n_opt ? json(*n_opt) : json(nullptr)},
                   {"vertex_count", pts.size()}, {"edge_count", edge_list.size()}};
    write_manifest(out, "ingest-image", seed, cfg, {image}, {"points.csv", "edges.csv"}, sw.ms());
    std::printf("ingest-image: %s -> %zu vertices, %zu edges -> %s\n", mode.c_str(), pts.size(),
                edge_list.size(), out.c_str());
    return 0;
}

// --------------------------------------------------------------- segment ---

std::vector<std::uint8_t> seed_mask_from_region(const SpatialGraph& g, const std::string& region) {
    std::istringstream iss(region);
    std::string kind;
    iss >> kind;
    std::vector<std::uint8_t> mask(g.size(), 0);
    if (kind == "circle") {
        double cx, cy, r;
        if (!(iss >> cx >> cy >> r))
            throw std::runtime_error("seed region: expected 'circle cx cy r'");
        for (std::size_t v = 0; v < g.size(); ++v)
            mask[v] = dist(g.pos(v), {cx, cy}) <= r ? 1 : 0;
        return mask;
    }
    if (kind == "rect") {
        double x0, y0, x1, y1;
        if (!(iss >> x0 >> y0 >> x1 >> y1))
            throw std::runtime_error("seed region: expected 'rect x0 y0 x1 y1'");
        for (std::size_t v = 0; v < g.size(); ++v) {
            const Point2 p = g.pos(v);
            mask[v] = (p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1) ? 1 : 0;
        }
        return mask;
    }
    // otherwise: a CSV file listing seed vertex indices
    for (const std::uint32_t idx : read_index_csv(region)) {
        if (idx >= g.size())
            throw std::runtime_error("seed region: vertex " + std::to_string(idx) +
                                     " out of range");
        mask[idx] = 1;
    }
    return mask;
}

GacConfig config_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    json j = json::parse(in);
    GacConfig cfg;
    for (const auto& [key, val] : j.items()) {
        if (key == "dt") cfg.dt = val.get<double>();
        else if (key == "c") cfg.c = val.get<double>();
        else if (key == "sigma") cfg.sigma = val.get<double>();
        else if (key == "lambda") cfg.lambda = val.get<double>();
        else if (key == "smoothing_variant") cfg.smoothing_variant = parse_smoothing(val.get<std::string>());
        else if (key == "curvature_variant") cfg.curvature_variant = parse_curvature(val.get<std::string>());
        else if (key == "max_iters") cfg.max_iters = val.get<int>();
        else if (key == "flip_fraction") cfg.flip_fraction = val.get<double>();
        else if (key == "patience") cfg.patience = val.get<int>();
        else if (key == "gauss_cutoff") cfg.gauss_cutoff = val.get<double>();
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
    return cfg;
}

json config_to_json(const GacConfig& cfg) {
    return json{{"dt", cfg.dt},
                {"c", cfg.c},
                {"sigma", cfg.sigma},
                {"lambda", cfg.lambda},
                {"smoothing_variant", to_string(cfg.smoothing_variant)},
                {"curvature_variant", to_string(cfg.curvature_variant)},
                {"max_iters", cfg.max_iters},
                {"flip_fraction", cfg.flip_fraction},
                {"patience", cfg.patience},
                {"gauss_cutoff", cfg.gauss_cutoff}};
}

struct SegmentOverrides {
    std::optional<double> dt, c, sigma, lambda, flip_fraction;
    std::optional<int> max_iters, patience;
};

int cmd_segment(const std::string& graph_dir, const std::string& values_path,
                const std::string& seed_region, const std::string& config_path,
                const SegmentOverrides& ov, int snapshot_every, const std::string& out) {
    Stopwatch sw;
    ensure_dir(out);

    const std::string points_path = path_in(graph_dir, "points.csv");
    const std::string edges_path = path_in(graph_dir, "edges.csv");
    auto [pts, point_values] = read_points_csv(points_path);
    const auto edge_list = read_edges_csv(edges_path);
    const SpatialGraph g = build_from_edges(std::move(pts), edge_list);

    std::vector<std::string> inputs{points_path, edges_path};
    ScalarField I = make_scalar(g);
    if (!values_path.empty()) {
        I.v = read_values_csv(values_path);
        inputs.push_back(values_path);
        if (I.v.size() != g.size())
            throw std::runtime_error("values file has " + std::to_string(I.v.size()) +
                                     " entries for a graph of " + std::to_string(g.size()));
    } else if (point_values.size() == g.size()) {
        I.v = point_values;
    } else {
        throw std::runtime_error(
            "no vertex values: pass --values or a points.csv with a value column");
    }

    GacConfig cfg = config_path.empty() ? GacConfig{} : config_from_json(config_path);
    if (!config_path.empty()) inputs.push_back(config_path);
    if (ov.dt) cfg.dt = *ov.dt;
    if (ov.c) cfg.c = *ov.c;
    if (ov.sigma) cfg.sigma = *ov.sigma;
    if (ov.lambda) cfg.lambda = *ov.lambda;
    if (ov.flip_fraction) cfg.flip_fraction = *ov.flip_fraction;
    if (ov.max_iters) cfg.max_iters = *ov.max_iters;
    if (ov.patience) cfg.patience = *ov.patience;
    cfg.validate();

    const std::vector<std::uint8_t> seed_mask = seed_mask_from_region(g, seed_region);

    std::vector<std::string> outputs{"labels.csv", "summary.json"};
    const IterationCallback snapshot = [&](const GacState& st) {
        if (snapshot_every > 0 && st.iteration % snapshot_every == 0) {
            char name[40];
            std::snprintf(name, sizeof name, "snapshot_%06d.csv", st.iteration);
            write_values_csv(path_in(out, name), st.u.v);
            outputs.push_back(name);
        }
    };

    const auto [labels, summary] = run(g, I, seed_mask, cfg, snapshot);

    write_labels_csv(path_in(out, "labels.csv"), labels);
    json sj{{"iterations", summary.iterations},
            {"final_flip_fraction", summary.final_flip_fraction},
            {"interior_count", summary.interior_count},
            {"converged", summary.converged},
            {"warning", summary.warning},
            {"wall_ms", summary.wall_ms},
            {"config", config_to_json(summary.config)}};
    {
        std::ofstream sout(path_in(out, "summary.json"));
        if (!sout) throw std::runtime_error("cannot write summary in '" + out + "'");
        sout << sj.dump(2) << "\n";
    }

    json cj = config_to_json(cfg);
    cj["graph"] = graph_dir;
    cj["seed_region"] = seed_region;
    cj["snapshot_every"] = snapshot_every;
    write_manifest(out, "segment", 0, cj, inputs, outputs, sw.ms());
    std::printf("segment: %d iterations, %zu interior vertices, %s -> %s\n", summary.iterations,
                summary.interior_count, summary.converged ? "converged" : "not converged",
                out.c_str());
    if (!summary.warning.empty()) std::printf("segment: warning: %s\n", summary.warning.c_str());
    return 0;
}

// -------------------------------------------------------------- validate ---

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

json checks_to_json(const std::string& suite, const json& protocol,
                    const std::vector<Check>& checks) {
    bool all = true;
    json arr = json::array();
    for (const Check& c : checks) {
        all = all && c.pass;
        arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    return json{{"suite", suite}, {"protocol", protocol}, {"checks", arr}, {"pass", all}};
}

std::vector<Check> gradient_checks(const ErrorTable& table, const std::vector<std::size_t>& sizes) {
    std::vector<Check> checks;
    bool monotone = true, beat = true;
    std::ostringstream md, bd;
    double prev = std::numeric_limits<double>::infinity();
    for (const std::size_t n : sizes) {
        const double raw = summarize(table, n, "gradient-geometric", "raw").median;
        const double avg = summarize(table, n, "gradient-geometric", "average").median;
        const double med = summarize(table, n, "gradient-geometric", "median").median;
        monotone = monotone && raw < prev;
        beat = beat && avg < raw && med < raw;
        md << "n=" << n << " raw " << raw << "; ";
        bd << "n=" << n << " raw " << raw << " avg " << avg << " med " << med << "; ";
        prev = raw;
    }
    checks.push_back({"raw-median-error-strictly-decreasing", monotone, md.str()});
    checks.push_back({"filtered-beats-raw-at-every-size", beat, bd.str()});
    return checks;
}

int cmd_validate(const std::string& suite, std::vector<std::size_t> sizes, int trials,
                 std::uint64_t seed, double C, const std::string& out) {
    Stopwatch sw;
    ensure_dir(out);
    std::sort(sizes.begin(), sizes.end());

    std::vector<Check> checks;
    std::vector<std::string> outputs;
    json protocol{{"sizes", sizes}, {"trials", trials}, {"seed", seed}, {"C", C}};

    if (suite == "gradient") {
        const ErrorTable table = gradient_convergence_experiment(
            AnalyticField::gaussian(0.25, 0.5, 0.5), sizes, trials, C, seed);
        write_error_table_csv(path_in(out, "table.csv"), table);
        outputs.push_back("table.csv");
        checks = gradient_checks(table, sizes);
    } else if (suite == "curvature") {
        const ErrorTable smooth = curvature_convergence_experiment(
            AnalyticField::conic(0.4, 0.3, -0.25, 0.5), sizes, trials, C, seed);
        const ErrorTable rough = curvature_convergence_experiment(
            AnalyticField::conic(0.4, 0.3, 0.5, 0.5), sizes, trials, C, seed);
        write_error_table_csv(path_in(out, "table_smooth.csv"), smooth);
        write_error_table_csv(path_in(out, "table_rough.csv"), rough);
        outputs = {"table_smooth.csv", "table_rough.csv"};
        for (const char* op : {"curvature-geometric", "curvature-gradient"}) {
            const double lo = summarize(smooth, sizes.front(), op, "median").median;
            const double hi = summarize(smooth, sizes.back(), op, "median").median;
            std::ostringstream d;
            d << "median e_r " << lo << " at n=" << sizes.front() << " -> " << hi << " at n="
              << sizes.back();
            checks.push_back({std::string("smooth-error-decreases-") + op, hi < lo, d.str()});
            bool dominate = true;
            std::ostringstream dd;
            for (const std::size_t n : sizes) {
                const double s = summarize(smooth, n, op, "median").mean;
                const double x = summarize(rough, n, op, "median").mean;
                dominate = dominate && x > s;
                dd << "n=" << n << " apex " << x << " vs smooth " << s << "; ";
            }
            checks.push_back({std::string("apex-error-dominates-") + op, dominate, dd.str()});
        }
    } else if (suite == "filters") {
        const std::size_t n = sizes.empty() ? 1000 : sizes.front();
        const SpatialGraph g =
            build_rgg(sample_uniform_points(n, unit_square(), seed), rgg_radius(n, C));
        const ScalarField cu = make_scalar(g, 1.0);
        const GaussianParams p{0.02, 4.0};
        const ScalarField fn = gaussian_normalized(g, cu, p);
        const ScalarField fs = gaussian_simple(g, cu, p);
        double dn = 0.0, ds = 0.0;
        for (std::size_t v = 0; v < g.size(); ++v) {
            dn = std::max(dn, std::abs(fn.v[v] - 1.0));
            ds = std::max(ds, std::abs(fs.v[v] - 1.0));
        }
        checks.push_back({"normalized-filter-preserves-constants", dn <= 1e-12,
                          "max drift " + std::to_string(dn)});
        checks.push_back({"plain-filter-fails-constants", ds > 0.01,
                          "max drift " + std::to_string(ds)});
        ScalarField m = make_scalar(g, 0.0);
        m.v[0] = 0.05;
        const ScalarField s = stopping_function(m, 0.05);
        checks.push_back({"stopping-anchors-exact", s.v[1] == 1.0 && s.v[0] == 0.5,
                          "g(0)=" + std::to_string(s.v[1]) + " g(lambda)=" + std::to_string(s.v[0])});
    } else { // exponent
        if (sizes.size() < 3) throw std::runtime_error("exponent suite needs at least 3 sizes");
        const ErrorTable table = gradient_convergence_experiment(
            AnalyticField::gaussian(0.25, 0.5, 0.5), sizes, trials, C, seed);
        write_error_table_csv(path_in(out, "table.csv"), table);
        outputs.push_back("table.csv");
        const double slope = error_exponent_fit(table, "gradient-geometric", "raw");
        std::ostringstream d;
        d << "fitted log-log slope " << slope << ", threshold -0.15";
        checks.push_back({"raw-error-exponent-negative", slope <= -0.15, d.str()});
        protocol["slope"] = slope;
    }

    const json report = checks_to_json(suite, protocol, checks);
    {
        std::ofstream cout_(path_in(out, "checks.json"));
        if (!cout_) throw std::runtime_error("cannot write checks in '" + out + "'");
        cout_ << report.dump(2) << "\n";
    }
    outputs.push_back("checks.json");

    json cfg = protocol;
    cfg["suite"] = suite;
    write_manifest(out, "validate", seed, cfg, {}, outputs, sw.ms());

    bool all = report["pass"].get<bool>();
    for (const auto& c : report["checks"])
        std::printf("[%s] %s — %s\n", c["pass"].get<bool>() ? "PASS" : "FAIL",
                    c["name"].get<std::string>().c_str(), c["detail"].get<std::string>().c_str());
    std::printf("validate %s: %s -> %s\n", suite.c_str(), all ? "pass" : "FAIL", out.c_str());
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "graph active-contour toolkit: build spatial graphs, ingest raster images, run "
        "level-set segmentation, and reproduce the convergence experiments. GAC_THREADS "
        "caps worker parallelism (0 = auto)."};
    app.require_subcommand(1);

    // gen-graph
    auto* gen = app.add_subcommand("gen-graph", "generate a spatial graph (random geometric or "
                                                "Delaunay) and write points/edges CSV");
    std::string gen_mode;
    std::optional<std::uint64_t> gen_n;
    double gen_C = 0.6;
    std::uint64_t gen_seed = 1;
    std::string gen_points, gen_out;
    gen->add_option("--mode", gen_mode, "graph construction: rgg | delaunay")
        ->required()
        ->check(CLI::IsMember({"rgg", "delaunay"}));
    auto* gen_n_opt = gen->add_option("--n", gen_n, "number of uniformly sampled vertices");
    gen->add_option("--C", gen_C, "radius constant: radius = C * n^(-1/3)")
        ->capture_default_str();
    auto* gen_seed_opt =
        gen->add_option("--seed", gen_seed, "RNG seed for vertex sampling")->capture_default_str();
    gen->add_option("--points", gen_points, "existing points CSV instead of sampling")
        ->check(CLI::ExistingFile)
        ->excludes(gen_n_opt)
        ->excludes(gen_seed_opt);
    gen->add_option("--out", gen_out, "output directory")->required();

    // ingest-image
    auto* ing = app.add_subcommand("ingest-image", "turn a PGM image into a spatial graph with "
                                                   "per-vertex intensities");
    std::string ing_image, ing_mode, ing_graph = "delaunay", ing_out;
    std::optional<std::uint64_t> ing_n;
    double ing_C = 0.6;
    std::uint64_t ing_seed = 1;
    ing->add_option("--image", ing_image, "input PGM (P2 or P5)")
        ->required()
        ->check(CLI::ExistingFile);
    ing->add_option("--mode", ing_mode, "vertex extraction: watershed | random")
        ->required()
        ->check(CLI::IsMember({"watershed", "random"}));
    ing->add_option("--n", ing_n, "vertex count for --mode random");
    ing->add_option("--graph", ing_graph, "graph construction: rgg | delaunay")
        ->capture_default_str()
        ->check(CLI::IsMember({"rgg", "delaunay"}));
    ing->add_option("--C", ing_C, "radius constant for --graph rgg")->capture_default_str();
    ing->add_option("--seed", ing_seed, "RNG seed for --mode random")->capture_default_str();
    ing->add_option("--out", ing_out, "output directory")->required();

    // segment
    auto* seg = app.add_subcommand("segment", "run active-contour segmentation on a graph");
    std::string seg_graph, seg_values, seg_region, seg_config, seg_out;
    SegmentOverrides ov;
    int seg_snapshot = 0;
    seg->add_option("--graph", seg_graph, "graph directory holding points.csv and edges.csv")
        ->required()
        ->check(CLI::ExistingDirectory);
    seg->add_option("--values", seg_values,
                    "per-vertex intensity CSV (default: value column of points.csv)")
        ->check(CLI::ExistingFile);
    seg->add_option("--seed-region", seg_region,
                    "'circle cx cy r', 'rect x0 y0 x1 y1', or a CSV of vertex indices")
        ->required();
    seg->add_option("--config", seg_config, "JSON file with solver parameters")
        ->check(CLI::ExistingFile);
    seg->add_option("--dt", ov.dt, "time step override");
    seg->add_option("--c", ov.c, "balloon-force override");
    seg->add_option("--sigma", ov.sigma, "smoothing-scale override");
    seg->add_option("--lambda", ov.lambda, "edge-sensitivity override");
    seg->add_option("--max-iters", ov.max_iters, "iteration-cap override");
    seg->add_option("--flip-fraction", ov.flip_fraction, "convergence-threshold override");
    seg->add_option("--patience", ov.patience, "quiet-iteration requirement override");
    seg->add_option("--snapshot-every", seg_snapshot,
                    "write the embedding every k iterations (0 = off)")
        ->check(CLI::NonNegativeNumber);
    seg->add_option("--out", seg_out, "output directory")->required();

    // validate
    auto* val = app.add_subcommand("validate", "run a convergence/filter experiment suite and "
                                               "check its expected properties");
    std::string val_suite, val_out;
    std::vector<std::size_t> val_sizes{1000, 2000, 4000, 8000};
    int val_trials = 10;
    std::uint64_t val_seed = 42;
    double val_C = 0.6;
    val->add_option("--suite", val_suite, "gradient | curvature | filters | exponent")
        ->required()
        ->check(CLI::IsMember({"gradient", "curvature", "filters", "exponent"}));
    val->add_option("--sizes", val_sizes, "graph sizes")->capture_default_str();
    val->add_option("--trials", val_trials, "graphs per size")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    val->add_option("--seed", val_seed, "experiment seed")->capture_default_str();
    val->add_option("--C", val_C, "radius constant")->capture_default_str();
    val->add_option("--out", val_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen->parsed())
            return cmd_gen_graph(gen_mode, gen_n, gen_C, gen_seed, gen_points, gen_out);
        if (ing->parsed())
            return cmd_ingest_image(ing_image, ing_mode, ing_n, ing_graph, ing_C, ing_seed,
                                    ing_out);
        if (seg->parsed())
            return cmd_segment(seg_graph, seg_values, seg_region, seg_config, ov, seg_snapshot,
                               seg_out);
        return cmd_validate(val_suite, val_sizes, val_trials, val_seed, val_C, val_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "gac: %s\n", e.what());
        return 1;
    }
}
