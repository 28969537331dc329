#include "finsler/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

using Params = std::map<std::string, double>;

struct Definition {
    CatalogInfo info;
    std::string F, G;  // closed antiderivatives
    std::string rest;  // closed phi minus h~ s, in (b2, s); empty when built in code
    std::function<PhiSpec::Fn(const Params&)> rest_fn;
    std::function<void(const Params&)> validate;
    std::function<double(const Params&)> b0;
    std::function<ChartHint(const Params&)> chart;
};

double inf() { return std::numeric_limits<double>::infinity(); }

ChartHint euclid(double shift = 0.0) { return {ChartHint::Kind::Euclidean, 0.0, shift}; }

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

double example2_b0(const Params& p) {
    const double eps = p.at("eps"), xi = p.at("xi"), mu = p.at("mu");
    const double k = mu * mu + eps * xi;
    double b0 = inf();
    if (xi < 0.0) b0 = std::min(b0, 1.0 / std::sqrt(-xi));
    if (k < 0.0) b0 = std::min(b0, std::sqrt(-eps / k));
    return b0;
}

void example2_validate(const Params& p) { require(p.at("eps") > 0.0, "eps must be positive"); }

double example5_b0(const Params& p) {
    const double c = p.at("c"), eps = p.at("eps");
    double b0 = std::sqrt(c);
    if (std::abs(eps) > 1.0) b0 = std::min(b0, std::sqrt(c) / std::abs(eps));
    return b0;
}

void example5_validate(const Params& p) {
    require(p.at("c") > 0.0, "c must be positive");
    require(p.at("eps") < 1.0, "eps must be less than 1");
}

Definition example2_like(std::string name, std::string title, std::vector<CatalogParam> params, std::string htilde,
                         std::string note, double shift_default) {
    Definition d;
    d.info.name = std::move(name);
    d.info.title = std::move(title);
    d.info.params = std::move(params);
    d.info.f = "(mu^2 + eps*xi)/(eps + (mu^2 + eps*xi)*t)";
    d.info.g = "0";
    d.info.Phi = "eps*sqrt(t/(1 - mu^2*t))";
    d.info.htilde = std::move(htilde);
    d.info.closed_phi = "sqrt(eps + eps*xi*b2 + mu^2*s^2)/(1 + xi*b2)";
    d.info.note = std::move(note);
    d.F = "log(eps + (mu^2 + eps*xi)*t)";
    d.G = "0";
    d.rest = d.info.closed_phi;
    d.validate = example2_validate;
    d.b0 = example2_b0;
    d.chart = [shift_default](const Params& p) { return euclid(p.count("a") ? p.at("a") : shift_default); };
    return d;
}

Definition example4_like(std::string name, std::string title, std::vector<CatalogParam> params, std::string htilde,
                         std::string note) {
    Definition d;
    d.info.name = std::move(name);
    d.info.title = std::move(title);
    d.info.params = std::move(params);
    d.info.f = "0";
    d.info.g = "0";
    d.info.Phi = "sqrt(t)/(1 - t)^(3/2)";
    d.info.htilde = std::move(htilde);
    d.info.closed_phi = "(1 - b2 + 2*s^2)/((1 - b2)^2*sqrt(1 - b2 + s^2))";
    d.info.note = std::move(note);
    d.F = "0";
    d.G = "0";
    d.rest = d.info.closed_phi;
    d.b0 = [](const Params&) { return 1.0; };
    d.chart = [](const Params& p) { return euclid(p.count("a") ? p.at("a") : 0.0); };
    return d;
}

Definition example5_like(std::string name, std::string title, std::string htilde, std::string note) {
    Definition d;
    d.info.name = std::move(name);
    d.info.title = std::move(title);
    d.info.params = {{"c", 1.0, "c > 0"}, {"eps", 0.5, "eps < 1"}};
    d.info.f = "0";
    d.info.g = "0";
    d.info.Phi = "(1/sqrt(c - t) - eps/sqrt(c - eps^2*t))*sqrt(t)/2";
    d.info.htilde = std::move(htilde);
    d.info.closed_phi = "(sqrt(c - b2 + s^2)/(c - b2) - eps*sqrt(c - eps^2*(b2 - s^2))/(c - eps^2*b2))/2";
    d.info.note = std::move(note);
    d.F = "0";
    d.G = "0";
    d.rest = d.info.closed_phi;
    d.validate = example5_validate;
    d.b0 = example5_b0;
    d.chart = [](const Params&) { return euclid(); };
    return d;
}

std::vector<Definition> build_definitions() {
    std::vector<Definition> defs;

    {
        Definition d;
        d.info.name = "example1";
        d.info.title = "g = 0, Phi = eta^(m/2), f = f0";
        d.info.params = {{"m", 3.0, "integer >= 1"}, {"f0", 0.5, "any"}};
        d.info.f = "f0";
        d.info.g = "0";
        d.info.Phi = "t^(m/2)";
        d.info.htilde = "0";
        d.info.closed_phi = "-exp(-(m/2)*f0*b2) * s*I_m(b2, s)";
        d.info.note = "phi through the closed antiderivatives I_m";
        d.F = "f0*t";
        d.G = "0";
        d.rest_fn = [](const Params& p) -> PhiSpec::Fn {
            const int m = static_cast<int>(p.at("m"));
            const double f0 = p.at("f0");
            return [m, f0](const Jet2& b2, const Jet2& s) { return -exp(b2 * (-0.5 * m * f0)) * s_I_n(m, b2, s); };
        };
        d.validate = [](const Params& p) {
            const double m = p.at("m");
            require(m >= 1.0 && m == std::floor(m) && m <= 64.0, "m must be an integer in 1..64");
        };
        d.b0 = [](const Params&) { return inf(); };
        d.chart = [](const Params&) { return euclid(); };
        defs.push_back(std::move(d));
    }

    defs.push_back(example2_like("example2", "g = 0, Phi = eps sqrt(eta / (1 - mu^2 eta))",
                                 {{"eps", 1.0, "eps > 0"}, {"xi", -1.0, "any"}, {"mu", 0.5, "any"}}, "0", "", 0.0));
    defs.push_back(example2_like("funk", "Funk metric",
                                 {{"eps", 1.0, "eps > 0"}, {"xi", -1.0, "any"}, {"mu", 1.0, "+-1 for Funk"}},
                                 "mu/(1 + xi*t)", "eps = 1, xi = -1, mu = +-1 with beta = <x, y> is the Funk metric",
                                 0.0));
    defs.push_back(example2_like(
        "generalized_funk", "generalized Funk metric",
        {{"eps", 1.0, "eps > 0"}, {"xi", -1.0, "any"}, {"mu", -1.0, "+-1"}, {"a", 0.2, "shift of beta along e1"}},
        "mu/(1 + xi*t)", "beta = <x + a, y>", 0.2));

    {
        Definition d;
        d.info.name = "example3";
        d.info.title = "f = g = 0, Phi = (1 + eta) sqrt(eta)";
        d.info.f = "0";
        d.info.g = "0";
        d.info.Phi = "(1 + t)*sqrt(t)";
        d.info.htilde = "0";
        d.info.closed_phi = "1 + b2 + s^2";
        d.F = "0";
        d.G = "0";
        d.rest = d.info.closed_phi;
        d.b0 = [](const Params&) { return inf(); };
        d.chart = [](const Params&) { return euclid(); };
        Definition berwald = d;
        defs.push_back(std::move(d));

        berwald.info.name = "berwald";
        berwald.info.title = "Berwald metric";
        berwald.info.params = {{"mu", -1.0, "chart constant; -1 gives Berwald's metric"}};
        berwald.info.htilde = "2*sqrt(1 + t)";
        berwald.info.note = "mu-family chart; mu = -1 is Berwald's metric";
        berwald.chart = [](const Params& p) { return ChartHint{ChartHint::Kind::MuFamily, p.at("mu"), 0.0}; };
        defs.push_back(std::move(berwald));
    }

    defs.push_back(example4_like("example4", "f = g = 0, Phi = sqrt(eta) / (1 - eta)^(3/2)", {}, "0",
                                 "denominator (1 - b2)^2"));
    defs.push_back(example4_like("generalized_berwald", "generalized Berwald metric",
                                 {{"sigma", 1.0, "+-1"}, {"a", 0.2, "shift of beta along e1"}},
                                 "-2*sigma/(1 - t)^2", "beta = <x + a, y>"));

    defs.push_back(example5_like("example5", "f = g = 0, Phi = (1/sqrt(c - eta) - eps/sqrt(c - eps^2 eta)) sqrt(eta)/2",
                                 "0", ""));
    defs.push_back(example5_like("shen", "Shen metric", "(1/(c - t) - eps^2/(c - eps^2*t))/2",
                                 "c = 1 with beta = <x, y> is Shen's metric"));

    {
        Definition d;
        d.info.name = "example6";
        d.info.title = "Phi = sqrt(eta), f = -lam^2 t/(1 - lam t)^2, g = lam^2/(1 - lam t)^2";
        d.info.params = {{"lam", 0.3, "any"}};
        d.info.f = "-lam^2*t/(1 - lam*t)^2";
        d.info.g = "lam^2/(1 - lam*t)^2";
        d.info.Phi = "sqrt(t)";
        d.info.htilde = "0";
        d.info.closed_phi = "sqrt((1 - lam*b2)*(1 - 2*lam*b2 + lam*s^2))/(1 - 2*lam*b2)";
        d.info.note = "with h~ = sqrt(1 - lam t)/(1 - 2 lam t) and beta = <x + a, y> the metric is Douglas but not "
                      "locally projectively flat";
        d.info.flags = {"Douglas, not projectively flat"};
        d.F = "0";
        d.G = "lam/(1 - lam*t)";
        d.rest = d.info.closed_phi;
        d.b0 = [](const Params& p) {
            const double lam = p.at("lam");
            return lam > 0.0 ? 1.0 / std::sqrt(2.0 * lam) : inf();
        };
        d.chart = [](const Params&) { return euclid(); };
        defs.push_back(std::move(d));
    }
    return defs;
}

const std::vector<Definition>& definitions() {
    static const std::vector<Definition> defs = build_definitions();
    return defs;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

RiemannChart ChartHint::make(int n) const {
    if (kind == Kind::MuFamily) return mu_family_chart(n, mu);
    Vector a = Vector::Zero(n);
    if (n > 0) a(0) = shift;
    return euclidean_chart(n, {}, a);
}

std::string ChartHint::describe() const {
    if (kind == Kind::MuFamily) return "mu-family, mu = " + format_number(mu);
    if (shift == 0.0) return "euclidean, b = x";
    return "euclidean, b = x + " + format_number(shift) + " e1";
}

const std::vector<CatalogInfo>& catalog_entries() {
    static const std::vector<CatalogInfo> infos = [] {
        std::vector<CatalogInfo> v;
        for (const Definition& d : definitions()) v.push_back(d.info);
        return v;
    }();
    return infos;
}

std::vector<std::string> catalog_suggestions(const std::string& name) {
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const Definition& d : definitions()) {
        const std::string& n = d.info.name;
        const std::size_t dist = edit_distance(name, n);
        const bool related = !name.empty() && (n.find(name) != std::string::npos || name.find(n) != std::string::npos);
        if (related || dist <= std::max<std::size_t>(2, n.size() / 3)) scored.emplace_back(related ? 0 : dist, n);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::string> out;
    for (const auto& s : scored) out.push_back(s.second);
    if (out.empty())
        for (const Definition& d : definitions()) out.push_back(d.info.name);
    return out;
}

CatalogEntry catalog(const std::string& name, const CatalogOptions& options) {
    const auto& defs = definitions();
    const auto it = std::find_if(defs.begin(), defs.end(), [&](const Definition& d) { return d.info.name == name; });
    if (it == defs.end()) {
        std::string msg = "unknown catalog entry '" + name + "'; did you mean:";
        for (const std::string& s : catalog_suggestions(name)) msg += " " + s;
        throw InvalidArgument(msg);
    }
    const Definition& d = *it;

    Params p;
    for (const CatalogParam& cp : d.info.params) p[cp.name] = cp.default_value;
    for (const auto& [k, v] : options.params) {
        if (!p.count(k)) throw InvalidArgument("catalog entry '" + name + "' has no parameter '" + k + "'");
        if (!std::isfinite(v)) throw InvalidArgument("parameter '" + k + "' must be finite");
        p[k] = v;
    }
    if (d.validate) d.validate(p);

    CatalogEntry e;
    e.info = d.info;
    e.params = p;
    e.b0 = d.b0(p);
    e.chart = d.chart(p);

    const std::string htilde = options.htilde.value_or(d.info.htilde);
    e.spec = make_solution_spec(d.info.f, d.info.g, htilde, d.info.Phi, p, d.F, d.G);
    if (options.perturb_Phi != 0.0) {
        Params q = p;
        q["perturbation"] = options.perturb_Phi;
        e.spec.Phi = expr::parse_t("(" + d.info.Phi + ") + perturbation", q);
    }
    e.spec.b0 = e.b0;
    e.spec.name = name;

    const expr::Expr h = e.spec.h;
    PhiSpec::Fn rest;
    if (d.rest_fn) {
        rest = d.rest_fn(p);
    } else {
        expr::ParseOptions o;
        o.variables = {"b2", "s"};
        o.constants = p;
        const expr::Expr r = expr::parse(d.rest, o);
        rest = [r](const Jet2& b2, const Jet2& s) {
            const Jet2 v[2] = {b2, s};
            return r.eval<Jet2>(std::span<const Jet2>(v, 2));
        };
    }
    PhiSpec closed;
    closed.phi = [h, rest](const Jet2& b2, const Jet2& s) { return h(b2) * s + rest(b2, s); };
    closed.b0 = e.b0;
    closed.provenance = "catalog: " + name;
    e.closed = std::move(closed);
    return e;
}

}  // namespace finsler
