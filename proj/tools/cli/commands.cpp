#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "finsler/catalog.hpp"
#include "finsler/douglas.hpp"
#include "finsler/errors.hpp"
#include "finsler/solutions.hpp"

#ifndef FINSLER_VERSION
#define FINSLER_VERSION "unknown"
#endif

namespace finsler::cli {

namespace {

constexpr double kInvariantTol = 1e-8;
constexpr double kClosedFormTol = 1e-7;

struct Metric {
    PhiSpec phi;
    expr::Expr f, g;
    std::optional<SolutionSpec> spec;
    std::optional<PhiSpec> closed;
    bool reconstructed = false;
    std::optional<ChartHint> hint;
};

Metric build_metric(const MetricConfig& m) {
    Metric out;
    try {
        switch (m.source) {
            case MetricConfig::Source::Catalog: {
                CatalogOptions o;
                o.params = m.params;
                o.htilde = m.htilde;
                o.perturb_Phi = m.perturb_Phi;
                CatalogEntry e = catalog(m.catalog, o);
                out.spec = e.spec;
                out.closed = e.closed;
                out.phi = *e.closed;
                out.f = e.spec.f;
                out.g = e.spec.g;
                out.hint = e.chart;
                break;
            }
            case MetricConfig::Source::Expression:
                out.phi = phi_from_source(m.phi, m.constants, m.b0);
                out.f = expr::parse_t(m.f, m.constants);
                out.g = expr::parse_t(m.g, m.constants);
                break;
            case MetricConfig::Source::Solution: {
                const json& s = m.solution;
                std::map<std::string, double> constants;
                if (s.contains("constants")) constants = s.at("constants").get<std::map<std::string, double>>();
                std::string F, G;
                if (s.contains("antideriv")) {
                    F = s.at("antideriv").at("F").get<std::string>();
                    G = s.at("antideriv").at("G").get<std::string>();
                }
                SolutionSpec spec = make_solution_spec(s.at("f").get<std::string>(), s.at("g").get<std::string>(),
                                                       s.at("h").get<std::string>(), s.at("Phi").get<std::string>(),
                                                       constants, F, G);
                if (s.contains("quadrature")) {
                    const json& q = s.at("quadrature");
                    spec.quadrature.nodes = q.value("nodes", spec.quadrature.nodes);
                    spec.quadrature.tol = q.value("tol", spec.quadrature.tol);
                    spec.quadrature.abs_tol = q.value("abs_tol", spec.quadrature.abs_tol);
                    spec.quadrature.max_depth = q.value("max_depth", spec.quadrature.max_depth);
                    spec.quadrature.max_panels = q.value("max_panels", spec.quadrature.max_panels);
                    if (spec.quadrature.nodes < 1 || spec.quadrature.nodes > 512 || !(spec.quadrature.tol > 0.0) ||
                        spec.quadrature.abs_tol < 0.0 || spec.quadrature.max_depth < 1 || spec.quadrature.max_panels < 2)
                        throw ConfigError("metric.solution.quadrature is out of range");
                }
                if (s.contains("b0")) spec.b0 = s.at("b0").get<double>();
                spec.name = "config";
                out.phi = reconstructed_phi(spec);
                out.f = spec.f;
                out.g = spec.g;
                out.spec = std::move(spec);
                out.reconstructed = true;
                break;
            }
        }
    } catch (const finsler::Error& e) {
        throw ConfigError(std::string("metric: ") + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("metric: ") + e.what());
    }
    return out;
}

RiemannChart build_chart(const ChartConfig& c, const std::optional<ChartHint>& hint) {
    if (!c.given && hint) return hint->make(c.n);
    if (c.kind == "mu_family") return mu_family_chart(c.n, c.mu);
    Matrix L;
    if (!c.L.empty()) {
        L = Matrix(c.n, c.n);
        for (int i = 0; i < c.n; ++i)
            for (int j = 0; j < c.n; ++j) L(i, j) = c.L[i][j];
    }
    Vector shift = Vector::Zero(c.n);
    for (std::size_t i = 0; i < c.shift.size(); ++i) shift[static_cast<Eigen::Index>(i)] = c.shift[i];
    return euclidean_chart(c.n, L, shift);
}

std::vector<BsPoint> build_grid(const GridConfig& g, double b0) {
    const double cap = std::isfinite(b0) ? b0 : std::numeric_limits<double>::infinity();
    const double b_min = g.b_min.value_or(0.1 * std::min(1.0, cap));
    const double b_max = g.b_max.value_or(0.8 * std::min(1.0, cap));
    if (!(b_max < cap)) throw ConfigError("grid.b_max must stay below b0 = " + std::to_string(b0));
    if (!(b_max >= b_min)) throw ConfigError("grid.b_max must be >= grid.b_min");
    if (g.nb == 0 || g.ns == 0) return {};
    return bs_grid(b_min, b_max, g.nb, g.ns, g.s_frac);
}

const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Trivial: return "trivial";
    }
    return "fail";
}

json vec_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

struct Check {
    Check(std::string n, double t) : name(std::move(n)), threshold(t) {}

    std::string name;
    double threshold = 0.0;
    double worst = 0.0;
    json point;
    int evaluated = 0;
    int errors = 0;
    std::string first_error;
    bool applicable = true;
    bool signed_values = false;  // compare r itself instead of |r|

    void observe(double r, const json& where) {
        ++evaluated;
        const double a = signed_values ? r : std::abs(r);
        if (evaluated == 1 || a > worst || std::isnan(a)) {
            worst = a;
            point = where;
        }
    }
    void fail(const std::string& what, const json& where) {
        if (errors++ == 0) {
            first_error = what;
            if (point.is_null()) point = where;
        }
    }
    Status status() const {
        if (errors > 0) return Status::Fail;
        if (!applicable || evaluated == 0) return Status::Trivial;
        return worst <= threshold ? Status::Pass : Status::Fail;
    }
    json to_json() const {
        json j{{"name", name},           {"status", status_name(status())}, {"threshold", threshold},
               {"evaluated", evaluated}, {"errors", errors}};
        j["worst_residual"] = evaluated > 0 ? json(worst) : json(nullptr);
        j["worst_point"] = point;
        if (errors > 0) j["first_error"] = first_error;
        return j;
    }
};

json point_json(const BsPoint& p) { return {{"b2", p.b2}, {"s", p.s}}; }

Outcome finish(const RunConfig& c, std::vector<Check> checks, json extra,
               std::chrono::steady_clock::time_point start) {
    Outcome o;
    json arr = json::array();
    bool failed = false;
    for (const Check& ch : checks) {
        arr.push_back(ch.to_json());
        failed = failed || ch.status() == Status::Fail;
    }
    o.report = std::move(extra);
    o.report["schema"] = kSchema;
    o.report["command"] = c.command;
    o.report["config"] = to_json(c);
    o.report["checks"] = arr;
    o.report["status"] = failed ? "fail" : "pass";
    o.report["version"] = version();
    o.report["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.exit_code = failed ? 1 : 0;
    return o;
}

}  // namespace

std::string version() { return FINSLER_VERSION; }

json error_body(const std::string& kind, const std::string& message) {
    return {{"schema", kSchema}, {"error", {{"kind", kind}, {"message", message}}}};
}

Outcome cmd_verify(const RunConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    const Metric m = build_metric(c.metric);
    const RiemannChart chart = build_chart(c.chart, m.hint);

    std::vector<Sample> samples;
    try {
        samples = PointSampler(chart, m.phi.b0, c.seed).draw(c.samples);
    } catch (const finsler::Error& e) {
        throw ConfigError(std::string("cannot sample the chart: ") + e.what());
    }

    struct Row {
        double norm = 0.0, invariants = 0.0, homogeneity = 0.0, closed = 0.0;
        bool conformal = false;
        std::string error;
    };
    std::vector<Row> rows(samples.size());
    parallel_for(static_cast<int>(samples.size()), c.threads, [&](int i) {
        const Sample& smp = samples[static_cast<std::size_t>(i)];
        Row& r = rows[static_cast<std::size_t>(i)];
        try {
            const ChartPoint p = evaluate_chart(chart, smp.x);
            const auto gamma = christoffel(p);
            const ConformalFactor cf = try_conformal_factor(p, beta_derivatives(p, gamma), 1e-9);
            const DouglasTensor dt = douglas_generic(p, m.phi, smp.y);
            r.norm = douglas_norm(dt);
            const TensorInvariants inv = tensor_invariants(dt);
            r.invariants = std::max({inv.symmetry, inv.contraction, inv.trace});
            r.homogeneity = homogeneity_defect(dt, douglas_generic(p, m.phi, 3.0 * smp.y), 3.0);
            if (cf.accepted) {
                r.conformal = true;
                const DouglasTensor dc = douglas_closed_form(p, m.phi, smp.y, cf.c);
                double worst = 0.0;
                for (std::size_t k = 0; k < dt.values().size(); ++k)
                    worst = std::max(worst, std::abs(dt.values()[k] - dc.values()[k]));
                r.closed = worst / (1.0 + dt.spray_scale);
            }
        } catch (const finsler::Error& e) {
            r.error = e.what();
        }
    });

    Check generic{"douglas_generic", c.tolerance.value_or(1e-6)};
    Check closed{"closed_form_agreement", kClosedFormTol};
    Check invariants{"tensor_invariants", kInvariantTol};
    Check homogeneity{"homogeneity", kInvariantTol};
    closed.applicable = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json where{{"x", vec_json(samples[i].x)}, {"y", vec_json(samples[i].y)}};
        const Row& r = rows[i];
        if (!r.error.empty()) {
            generic.fail(r.error, where);
            continue;
        }
        generic.observe(r.norm, where);
        invariants.observe(r.invariants, where);
        homogeneity.observe(r.homogeneity, where);
        if (r.conformal) {
            closed.applicable = true;
            closed.observe(r.closed, where);
        }
    }
    json extra;
    extra["verdict"] = generic.status() == Status::Pass ? "Douglas" : "not Douglas";
    extra["chart"] = chart.kind();
    return finish(c, {generic, closed, invariants, homogeneity}, extra, start);
}

Outcome cmd_pde_check(const RunConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    const Metric m = build_metric(c.metric);
    const std::vector<BsPoint> grid = build_grid(c.grid, m.phi.b0);
    const double tol = c.tolerance.value_or(m.reconstructed ? 1e-7 : 1e-9);

    struct Row {
        double pde = 0.0, lemma = 0.0, chr = 0.0, psi = 0.0;
        bool has_chr = false;
        std::string error;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), c.threads, [&](int i) {
        const BsPoint& p = grid[static_cast<std::size_t>(i)];
        Row& r = rows[static_cast<std::size_t>(i)];
        try {
            r.pde = pde_residual(m.phi, m.f, m.g, p.b2, p.s);
            r.lemma = douglas_condition(m.phi, p.b2, p.s).residual;
            if (m.spec) {
                r.psi = psi_identity_residual(*m.spec, m.closed ? *m.closed : m.phi, p.b2, p.s);
                if (p.s != 0.0) {
                    r.chr = characteristic_residual(*m.spec, p.b2, p.s);
                    r.has_chr = true;
                }
            }
        } catch (const finsler::Error& e) {
            r.error = e.what();
        }
    });

    Check pde{"pde_residual", tol};
    Check lemma{"douglas_condition", tol};
    Check psi{"psi_identity", tol};
    Check chr{"characteristic_residual", tol};
    psi.applicable = chr.applicable = m.spec.has_value();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json where = point_json(grid[i]);
        const Row& r = rows[i];
        if (!r.error.empty()) {
            pde.fail(r.error, where);
            continue;
        }
        pde.observe(r.pde, where);
        lemma.observe(r.lemma, where);
        if (m.spec) psi.observe(r.psi, where);
        if (r.has_chr) chr.observe(r.chr, where);
    }
    std::vector<Check> checks{pde, lemma};
    if (m.spec) {
        checks.push_back(psi);
        checks.push_back(chr);
    }
    return finish(c, checks, json::object(), start);
}

Outcome cmd_solve(const RunConfig& c, std::ostream& csv) {
    const auto start = std::chrono::steady_clock::now();
    const Metric m = build_metric(c.metric);
    if (!m.spec) throw ConfigError("solve needs a catalog or solution metric");
    const SolutionSpec& spec = *m.spec;
    const std::vector<BsPoint> grid = build_grid(c.grid, m.phi.b0);
    const int n = c.chart.n;

    struct Row {
        double phi = 0.0, reduced = 0.0, eta = 0.0, Phi = 0.0, margin1 = 0.0, margin2 = 0.0;
        std::string error;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), c.threads, [&](int i) {
        const BsPoint& p = grid[static_cast<std::size_t>(i)];
        Row& r = rows[static_cast<std::size_t>(i)];
        try {
            const Jet2 j = phi_jet(spec, p.b2, p.s, 0, 1);
            r.phi = j.coeff(0, 0);
            r.reduced = j.coeff(0, 0) - p.s * j.coeff(0, 1);
            r.eta = eta(spec, p.b2, p.s);
            r.Phi = spec.Phi(r.eta);
            const SolutionRegularityReport reg = finsler_regularity(spec, {p}, n);
            r.margin1 = reg.margin1;
            r.margin2 = reg.margin2;
        } catch (const finsler::Error& e) {
            r.error = e.what();
        }
    });

    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    csv << "b2,s,phi,phi_minus_s_phi2,eta,Phi_eta,margin1,margin2,error\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        csv << num(grid[i].b2) << ',' << num(grid[i].s) << ',';
        if (r.error.empty()) {
            csv << num(r.phi) << ',' << num(r.reduced) << ',' << num(r.eta) << ',' << num(r.Phi) << ','
                << num(r.margin1) << ',' << num(r.margin2) << ",\n";
        } else {
            std::string e = r.error;
            std::replace(e.begin(), e.end(), '"', '\'');
            csv << ",,,,,,\"" << e << "\"\n";
        }
    }

    const double tol = c.tolerance.value_or(1e-8);
    Check rows_check{"rows", 0.0};
    Check psi{"psi_identity", tol};
    Check closed{"closed_form", tol};
    Check regular{"regularity", 0.0};
    regular.signed_values = true;
    closed.applicable = m.closed.has_value();
    std::vector<BsPoint> ok;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json where = point_json(grid[i]);
        const Row& r = rows[i];
        if (!r.error.empty()) {
            rows_check.fail(r.error, where);
            continue;
        }
        rows_check.observe(0.0, where);
        ok.push_back(grid[i]);
        psi.observe(r.reduced - r.Phi / std::sqrt(grid[i].b2 - grid[i].s * grid[i].s), where);
        regular.observe(n < 3 ? -r.margin2 : std::max(-r.margin1, -r.margin2), where);
    }
    json extra;
    if (m.closed && !ok.empty()) {
        try {
            const ClosedFormAgreement a = compare_with_closed_form(spec, *m.closed, ok);
            closed.observe(a.max_error, point_json(a.worst));
            extra["kappa"] = a.kappa;
        } catch (const finsler::Error& e) {
            closed.fail(e.what(), json(nullptr));
        }
    }
    extra["rows"] = grid.size();
    return finish(c, {rows_check, psi, closed, regular}, extra, start);
}

json cmd_catalog(const std::optional<std::string>& name) {
    auto info_json = [](const CatalogInfo& i) {
        json params = json::array();
        for (const CatalogParam& p : i.params)
            params.push_back({{"name", p.name}, {"default", p.default_value}, {"constraint", p.constraint}});
        return json{{"name", i.name},     {"title", i.title},       {"params", params},         {"f", i.f},
                    {"g", i.g},           {"Phi", i.Phi},           {"htilde", i.htilde},       {"closed_phi", i.closed_phi},
                    {"note", i.note},     {"flags", i.flags}};
    };
    json out{{"schema", kSchema}};
    if (!name) {
        json entries = json::array();
        for (const CatalogInfo& i : catalog_entries()) {
            json j = info_json(i);
            const CatalogEntry e = catalog(i.name);
            j["chart"] = e.chart.describe();
            j["b0"] = std::isfinite(e.b0) ? json(e.b0) : json(nullptr);
            entries.push_back(j);
        }
        out["entries"] = entries;
        return out;
    }
    CatalogEntry e;
    try {
        e = catalog(*name);
    } catch (const finsler::Error& err) {
        throw ConfigError(err.what());
    }
    json j = info_json(e.info);
    j["resolved_params"] = e.params;
    j["b0"] = std::isfinite(e.b0) ? json(e.b0) : json(nullptr);
    j["chart"] = e.chart.describe();
    out["entry"] = j;
    return out;
}

}  // namespace finsler::cli
