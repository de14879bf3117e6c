// Acceptance gate: twelve numbered checks covering the library's contract,
// each printed as a single [PASS]/[FAIL] line with key metrics and runtime.
// Exit status is the number of failed checks.

#include <gac/analytic.hpp>
#include <gac/calculus.hpp>
#include <gac/delaunay.hpp>
#include <gac/engine.hpp>
#include <gac/filters.hpp>
#include <gac/graph.hpp>
#include <gac/validation.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace gac;

namespace {

struct CheckResult {
    bool pass = true;
    std::string detail;
};

std::ostringstream& fail(CheckResult& r, std::ostringstream& oss) {
    r.pass = false;
    return oss;
}

SpatialGraph star_graph(const std::vector<std::pair<double, double>>& polar) {
    std::vector<Point2> pts{{0.0, 0.0}};
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t i = 0; i < polar.size(); ++i) {
        pts.push_back({polar[i].second * std::cos(polar[i].first),
                       polar[i].second * std::sin(polar[i].first)});
        edges.emplace_back(0u, std::uint32_t(i + 1));
    }
    return build_from_edges(std::move(pts), edges);
}

double jaccard(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inter += (a[i] && b[i]) ? 1 : 0;
        uni += (a[i] || b[i]) ? 1 : 0;
    }
    return uni == 0 ? 0.0 : double(inter) / double(uni);
}

// ---------------------------------------------------------------- checks ---

CheckResult check_fan_tiling() {
    CheckResult r;
    std::ostringstream oss;
    Rng rng(10061);
    double worst_sum = 0.0, worst_chain = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 1 + int(rng.below(30));
        std::vector<std::pair<double, double>> polar;
        for (int i = 0; i < n; ++i)
            polar.push_back({rng.uniform(0.0, two_pi), rng.uniform(0.01, 0.3)});
        const SpatialGraph g = star_graph(polar);
        const NeighborFan f = g.fan(0);
        double total = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            total += f[i].dphi;
            if (f[i].dphi < 0.0) fail(r, oss) << "negative arc width; ";
            const double end = f[i].omega + f[i].dphi;
            const double next = i + 1 < f.size() ? f[i + 1].omega : f[0].omega + two_pi;
            worst_chain = std::max(worst_chain, std::abs(end - next));
        }
        worst_sum = std::max(worst_sum, std::abs(total - two_pi));
    }
    if (worst_sum > 1e-9) fail(r, oss) << "arc sum departs 2pi by " << worst_sum << "; ";
    if (worst_chain > 1e-9) fail(r, oss) << "arcs do not tile, gap " << worst_chain << "; ";
    oss << "1000 fans, max |sum-2pi| " << worst_sum << ", max tiling gap " << worst_chain;
    r.detail = oss.str();
    return r;
}

CheckResult check_quadrature() {
    CheckResult r;
    std::ostringstream oss;
    const AnalyticField f = AnalyticField::gaussian(0.25, 0.5, 0.5);
    Rng rng(10062);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const Point2 p{rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)};
        const Vec2 exact = f.gradient(p);
        const Vec2 got = riemann_gradient_oracle(f, p, 1000000);
        worst = std::max(worst, std::hypot(got.x - exact.x, got.y - exact.y));
    }
    if (worst > 1e-6) fail(r, oss) << "quadrature error " << worst << " > 1e-6; ";
    oss << "20 points, 1e6 partitions, max gradient error " << worst;
    r.detail = oss.str();
    return r;
}

CheckResult check_gradient_exactness() {
    CheckResult r;
    std::ostringstream oss;
    // affine field on a symmetric cross reproduces the gradient to 1e-12
    const SpatialGraph cross =
        star_graph({{0.0, 0.1}, {pi / 2, 0.1}, {pi, 0.1}, {3 * pi / 2, 0.1}});
    double worst_affine = 0.0;
    for (const auto& [ax, ay, b] :
         std::vector<std::array<double, 3>>{{2.0, -3.0, 0.7}, {-0.5, 0.25, 0.0}, {1.0, 1.0, 5.0}}) {
        ScalarField u = make_scalar(cross);
        for (std::size_t v = 0; v < cross.size(); ++v)
            u.v[v] = ax * cross.pos(v).x + ay * cross.pos(v).y + b;
        const VectorField gr = gradient_geometric(cross, u);
        worst_affine = std::max({worst_affine, std::abs(gr.x[0] - ax), std::abs(gr.y[0] - ay)});
    }
    if (worst_affine > 1e-12) fail(r, oss) << "affine error " << worst_affine << "; ";

    // constants map to exactly zero through every operator
    const SpatialGraph g = build_rgg(sample_uniform_points(500, unit_square(), 10063), 0.08);
    const ScalarField cu = make_scalar(g, 2.5);
    const VectorField ge = gradient_geometric(g, cu);
    const VectorField gw = gradient_weighted_sum(g, cu);
    const ScalarField gm = gradient_magnitude_maxdiff(g, cu);
    const VectorField F = unit_field(ge);
    const ScalarField kg = curvature_geometric(g, F);
    const ScalarField kd = curvature_gradient_based(g, F);
    bool exact = true;
    for (std::size_t v = 0; v < g.size(); ++v)
        exact = exact && ge.x[v] == 0.0 && ge.y[v] == 0.0 && gw.x[v] == 0.0 && gw.y[v] == 0.0 &&
                gm.v[v] == 0.0 && kg.v[v] == 0.0 && kd.v[v] == 0.0;
    if (!exact) fail(r, oss) << "constant field not annihilated exactly; ";
    oss << "affine error " << worst_affine << ", constants exact through all five operators";
    r.detail = oss.str();
    return r;
}

CheckResult check_telescoping() {
    CheckResult r;
    std::ostringstream oss;
    Rng rng(10064);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 1 + int(rng.below(12));
        std::vector<std::pair<double, double>> polar;
        for (int i = 0; i < n; ++i)
            polar.push_back({rng.uniform(0.0, two_pi), rng.uniform(0.05, 0.3)});
        const SpatialGraph g = star_graph(polar);
        VectorField F = make_vector(g);
        const double ang = rng.uniform(0.0, two_pi);
        for (std::size_t v = 0; v < g.size(); ++v) {
            F.x[v] = std::cos(ang);
            F.y[v] = std::sin(ang);
        }
        worst = std::max(worst, std::abs(curvature_geometric(g, F).v[0]));
    }
    if (worst > 1e-12) fail(r, oss) << "constant-field curvature " << worst << " > 1e-12; ";
    oss << "1000 fans, max |kappa| " << worst;
    r.detail = oss.str();
    return r;
}

struct TrendTables {
    ErrorTable gradient; // gaussian field
};

CheckResult check_gradient_trend(ErrorTable& table_out) {
    CheckResult r;
    std::ostringstream oss;
    const AnalyticField f = AnalyticField::gaussian(0.25, 0.5, 0.5);
    const std::vector<std::size_t> sizes{1000, 2000, 4000, 8000};
    table_out = gradient_convergence_experiment(f, sizes, 10, 0.6, 20260816);
    double prev = 1e300;
    bool monotone = true, filtered_win = true;
    for (const std::size_t n : sizes) {
        const double raw = summarize(table_out, n, "gradient-geometric", "raw").median;
        const double avg = summarize(table_out, n, "gradient-geometric", "average").median;
        const double med = summarize(table_out, n, "gradient-geometric", "median").median;
        monotone = monotone && raw < prev;
        filtered_win = filtered_win && avg < raw && med < raw;
        prev = raw;
        oss << "n=" << n << " raw " << raw << " avg " << avg << " med " << med << "; ";
    }
    if (!monotone) fail(r, oss) << "median e_r not strictly decreasing; ";
    if (!filtered_win) fail(r, oss) << "a filtered variant failed to beat raw; ";
    r.detail = oss.str();
    return r;
}

CheckResult check_gradient_slope(const ErrorTable& table) {
    CheckResult r;
    std::ostringstream oss;
    const double slope = error_exponent_fit(table, "gradient-geometric", "raw");
    if (!(slope <= -0.15)) fail(r, oss) << "slope " << slope << " > -0.15; ";
    oss << "log-log slope of raw gradient error " << slope << " (bound -0.15)";
    r.detail = oss.str();
    return r;
}

CheckResult check_curvature_trend() {
    CheckResult r;
    std::ostringstream oss;
    const std::vector<std::size_t> sizes{1000, 2000, 4000, 8000};
    const AnalyticField smooth = AnalyticField::conic(0.4, 0.3, -0.25, 0.5);
    const AnalyticField rough = AnalyticField::conic(0.4, 0.3, 0.5, 0.5);
    const ErrorTable ts = curvature_convergence_experiment(smooth, sizes, 10, 0.6, 20260817);
    const ErrorTable tr = curvature_convergence_experiment(rough, sizes, 10, 0.6, 20260817);
    for (const char* op : {"curvature-geometric", "curvature-gradient"}) {
        const double lo = summarize(ts, 1000, op, "median").median;
        const double hi = summarize(ts, 8000, op, "median").median;
        if (!(hi < lo)) fail(r, oss) << op << " did not improve (n=8000 " << hi << " vs n=1000 "
                                     << lo << "); ";
        oss << op << " median-filtered median e_r " << lo << " -> " << hi << "; ";
        for (const std::size_t n : sizes) {
            const double s = summarize(ts, n, op, "median").mean;
            const double x = summarize(tr, n, op, "median").mean;
            if (!(x > s))
                fail(r, oss) << op << " apex-on-domain case not harder at n=" << n << " (" << x
                             << " vs " << s
                             << "; known expectation-level reversal: the apex inflates the "
                                "reference curvature energy that normalizes e_r, and the "
                                "smooth case's cascaded estimate is noisiest at the smallest "
                                "size); ";
        }
    }
    oss << "apex-on-domain mean e_r vs smooth checked at every size for both operators";
    r.detail = oss.str();
    return r;
}

CheckResult check_arc_distribution() {
    CheckResult r;
    std::ostringstream oss;
    Rng rng(10068);
    for (const int N : {5, 10, 20}) {
        double sum = 0.0;
        std::int64_t count = 0;
        std::vector<FanEntry> fan(static_cast<std::size_t>(N));
        for (int rep = 0; rep < 12000; ++rep) {
            for (int i = 0; i < N; ++i)
                fan[std::size_t(i)] =
                    FanEntry{std::uint32_t(i + 1), rng.uniform(0.0, two_pi), 0.1, 0.0, 0.0};
            std::sort(fan.begin(), fan.end(),
                      [](const FanEntry& a, const FanEntry& b) { return a.phi < b.phi; });
            complete_fan(fan);
            for (const FanEntry& e : fan) {
                sum += e.dphi * e.dphi;
                ++count;
            }
        }
        const double got = sum / double(count);
        const double expect = 6.0 * pi * pi / (double(N) * double(N + 1));
        const double rel = std::abs(got - expect) / expect;
        if (rel > 0.10) fail(r, oss) << "N=" << N << " off by " << rel * 100 << "%; ";
        oss << "N=" << N << " E[dphi^2] " << got << " vs " << expect << " (" << rel * 100
            << "%); ";
    }
    r.detail = oss.str();
    return r;
}

CheckResult check_filter_laws() {
    CheckResult r;
    std::ostringstream oss;
    const SpatialGraph g =
        build_rgg(sample_uniform_points(1000, unit_square(), 10069), rgg_radius(1000, 0.6));
    const ScalarField cu = make_scalar(g, 1.0);
    const GaussianParams p{0.02, 4.0};
    const ScalarField fn = gaussian_normalized(g, cu, p);
    const ScalarField fs = gaussian_simple(g, cu, p);
    double worst_n = 0.0, worst_s = 0.0;
    for (std::size_t v = 0; v < g.size(); ++v) {
        worst_n = std::max(worst_n, std::abs(fn.v[v] - 1.0));
        worst_s = std::max(worst_s, std::abs(fs.v[v] - 1.0));
    }
    if (worst_n > 1e-12) fail(r, oss) << "normalized filter shifts constants by " << worst_n
                                      << "; ";
    if (!(worst_s > 0.01)) fail(r, oss) << "plain filter unexpectedly tame (" << worst_s
                                        << "); ";
    ScalarField m = make_scalar(g, 0.0);
    m.v[1] = 0.05;
    const ScalarField s = stopping_function(m, 0.05);
    if (s.v[0] != 1.0) fail(r, oss) << "g(0) != 1; ";
    if (s.v[1] != 0.5) fail(r, oss) << "g(lambda) != 1/2; ";
    oss << "normalized drift " << worst_n << ", plain drift " << worst_s
        << ", g(0)=1 and g(lambda)=0.5 exact";
    r.detail = oss.str();
    return r;
}

CheckResult check_disk_segmentation() {
    CheckResult r;
    std::ostringstream oss;
    const SpatialGraph g =
        build_rgg(sample_uniform_points(5500, unit_square(), 2026), rgg_radius(5500, 0.6));
    ScalarField I = make_scalar(g);
    std::vector<std::uint8_t> truth(g.size(), 0), seed(g.size(), 0);
    for (std::size_t v = 0; v < g.size(); ++v) {
        const double d = dist(g.pos(v), {0.5, 0.5});
        I.v[v] = d <= 0.25 ? 1.0 : 0.0;
        truth[v] = d <= 0.25 ? 1 : 0;
        seed[v] = d <= 0.26 ? 1 : 0;
    }
    GacConfig cfg; // defaults: dt 0.005, c 20, sigma 0.02, lambda 0.05
    const auto [labels, sum] = run(g, I, seed, cfg);
    const double j = jaccard(labels, truth);
    if (!(j >= 0.85)) fail(r, oss) << "Jaccard " << j << " < 0.85; ";
    if (!(sum.iterations <= 2000)) fail(r, oss) << "needed " << sum.iterations << " iterations; ";
    oss << "Jaccard " << j << " after " << sum.iterations << " iterations (converged="
        << (sum.converged ? "yes" : "no") << ")";
    r.detail = oss.str();
    return r;
}

CheckResult check_topology_change() {
    CheckResult r;
    std::ostringstream oss;
    const SpatialGraph g =
        build_rgg(sample_uniform_points(5500, unit_square(), 4094), rgg_radius(5500, 0.45));
    const Point2 c1{0.3, 0.5}, c2{0.7, 0.5};
    const double rad = 0.15;
    ScalarField I = make_scalar(g);
    std::vector<std::uint8_t> seed(g.size(), 0), disk1(g.size(), 0), disk2(g.size(), 0);
    for (std::size_t v = 0; v < g.size(); ++v) {
        disk1[v] = dist(g.pos(v), c1) <= rad ? 1 : 0;
        disk2[v] = dist(g.pos(v), c2) <= rad ? 1 : 0;
        I.v[v] = (disk1[v] || disk2[v]) ? 1.0 : 0.0;
        seed[v] = I.v[v] > 0.5 ? 1 : 0;
    }
    GacConfig cfg;
    cfg.dt = 0.001;
    cfg.c = 40.0;
    cfg.sigma = 0.005;
    cfg.lambda = 0.1;
    const auto [labels, sum] = run(g, I, seed, cfg);
    const auto [comp, count] = connected_components(g, labels);
    if (count != 2) fail(r, oss) << "expected 2 interior components, got " << count << "; ";
    double j1 = 0.0, j2 = 0.0;
    for (int ci = 0; ci < count; ++ci) {
        std::vector<std::uint8_t> member(g.size(), 0);
        for (std::size_t v = 0; v < g.size(); ++v) member[v] = comp[v] == ci ? 1 : 0;
        j1 = std::max(j1, jaccard(member, disk1));
        j2 = std::max(j2, jaccard(member, disk2));
    }
    if (!(j1 >= 0.7)) fail(r, oss) << "left disk Jaccard " << j1 << " < 0.7; ";
    if (!(j2 >= 0.7)) fail(r, oss) << "right disk Jaccard " << j2 << " < 0.7; ";
    oss << count << " components after " << sum.iterations << " iterations, per-disk Jaccard "
        << j1 << " / " << j2;
    r.detail = oss.str();
    return r;
}

CheckResult check_oracle_equivalence() {
    CheckResult r;
    std::ostringstream oss;

    // neighborhood graphs against the all-pairs rule
    {
        const auto pts = sample_uniform_points(200, unit_square(), 10072);
        const double rad = rgg_radius(200, 0.6);
        const SpatialGraph g = build_rgg(pts, rad);
        std::set<std::pair<std::uint32_t, std::uint32_t>> expect;
        for (std::uint32_t a = 0; a < 200; ++a)
            for (std::uint32_t b = a + 1; b < 200; ++b)
                if (dist(pts[a], pts[b]) <= rad) expect.insert({a, b});
        const auto got = g.edges();
        if (std::set(got.begin(), got.end()) != expect)
            fail(r, oss) << "radius graph differs from the all-pairs scan; ";
    }

    // triangulation satisfies empty circumcircles against a brute scan
    {
        const auto pts = sample_uniform_points(100, unit_square(), 10073);
        std::vector<std::array<std::uint32_t, 3>> tris;
        build_delaunay(pts, &tris);
        bool ok = !tris.empty();
        for (const auto& t : tris) {
            const long double ax = pts[t[0]].x, ay = pts[t[0]].y;
            const long double bx = pts[t[1]].x, by = pts[t[1]].y;
            const long double cx = pts[t[2]].x, cy = pts[t[2]].y;
            const long double d = 2.0L * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
            if (d == 0.0L) {
                ok = false;
                break;
            }
            const long double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by,
                              c2 = cx * cx + cy * cy;
            const long double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
            const long double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
            const long double r2 =
                (ux - ax) * (ux - ax) + (uy - ay) * (uy - ay);
            for (std::uint32_t i = 0; i < pts.size() && ok; ++i) {
                if (i == t[0] || i == t[1] || i == t[2]) continue;
                const long double dx = pts[i].x - ux, dy = pts[i].y - uy;
                if (dx * dx + dy * dy < r2 - 1e-12L) ok = false;
            }
            if (!ok) break;
        }
        if (!ok) fail(r, oss) << "triangulation violates the empty-circle rule; ";
    }

    // neighborhood and kernel filters against brute-force scans
    {
        const SpatialGraph g = build_rgg(sample_uniform_points(300, unit_square(), 10074), 0.1);
        ScalarField u = make_scalar(g);
        Rng rng(10075);
        for (auto& x : u.v) x = rng.uniform(-1.0, 1.0);
        const ScalarField fa = filter_average(g, u);
        const ScalarField fm = filter_median(g, u);
        for (std::size_t v = 0; v < g.size(); ++v) {
            std::vector<double> vals{u.v[v]};
            for (const FanEntry& e : g.fan(v)) vals.push_back(u.v[e.nb]);
            double mean = 0;
            for (const double x : vals) mean += x;
            mean /= double(vals.size());
            std::sort(vals.begin(), vals.end());
            const double med = 0.5 * (vals[(vals.size() - 1) / 2] + vals[vals.size() / 2]);
            if (std::abs(fa.v[v] - mean) > 1e-14 || fm.v[v] != med) {
                fail(r, oss) << "neighborhood filter mismatch; ";
                break;
            }
        }
        // huge cutoff makes truncation a no-op, so the grid scan must equal
        // the untruncated quadratic-loop references to 1e-9 relative
        const GaussianParams wide{0.05, 40.0};
        const ScalarField t1 = gaussian_simple(g, u, wide);
        const ScalarField b1 = gaussian_simple_brute(g, u, 0.05);
        const ScalarField t2 = gaussian_normalized(g, u, wide);
        const ScalarField b2 = gaussian_normalized_brute(g, u, 0.05);
        const VectorField t3 = gaussian_derivative_normalized(g, u, wide);
        const VectorField b3 = gaussian_derivative_normalized_brute(g, u, 0.05);
        double worst = 0.0;
        for (std::size_t v = 0; v < g.size(); ++v) {
            worst = std::max(worst, std::abs(t1.v[v] - b1.v[v]) / std::max(1.0, std::abs(b1.v[v])));
            worst = std::max(worst, std::abs(t2.v[v] - b2.v[v]));
            worst = std::max(worst, std::hypot(t3.x[v] - b3.x[v], t3.y[v] - b3.y[v]));
        }
        if (worst > 1e-9) fail(r, oss) << "kernel filter departs brute force by " << worst << "; ";
        oss << "radius graph, triangulation, neighborhood and kernel filters all match "
               "their references (kernel gap "
            << worst << ")";
    }
    r.detail = oss.str();
    return r;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<CheckResult()> body;
        double limit_s;
    };

    ErrorTable gradient_table;
    const std::vector<Entry> entries{
        {1, "fan arcs tile the circle", check_fan_tiling, 1.0},
        {2, "circle quadrature recovers analytic gradients", check_quadrature, 10.0},
        {3, "gradient operators exact on affine and constant fields", check_gradient_exactness,
         60.0},
        {4, "constant-field curvature telescopes to zero", check_telescoping, 60.0},
        {5, "gradient error falls with graph size and filters help",
         [&] { return check_gradient_trend(gradient_table); }, 300.0},
        {6, "gradient error exponent is negative",
         [&] { return check_gradient_slope(gradient_table); }, 60.0},
        {7, "curvature error falls when smooth and rises at an interior apex",
         check_curvature_trend, 600.0},
        {8, "arc widths follow the predicted second moment", check_arc_distribution, 60.0},
        {9, "smoothing filter laws hold", check_filter_laws, 60.0},
        {10, "disk segmentation reaches its ground truth", check_disk_segmentation, 300.0},
        {11, "two-disk contour splits into two components", check_topology_change, 300.0},
        {12, "fast paths match brute-force references", check_oracle_equivalence, 120.0},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult res;
        try {
            res = e.body();
        } catch (const std::exception& ex) {
            res.pass = false;
            res.detail = std::string("exception: ") + ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > e.limit_s) {
            res.pass = false;
            res.detail += " [over the " + std::to_string(e.limit_s) + " s budget]";
        }
        std::printf("[%s] %2d %s — %s (%.1f s)\n", res.pass ? "PASS" : "FAIL", e.id, e.name,
                    res.detail.c_str(), secs);
        std::fflush(stdout);
        failures += res.pass ? 0 : 1;
    }
    if (failures) std::printf("%d of 12 checks failed\n", failures);
    else std::printf("all 12 checks passed\n");
    return failures;
}
