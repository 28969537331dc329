#pragma once

// Named Douglas solutions with their closed-form phi where one is known.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsler/chart.hpp"
#include "finsler/gab.hpp"
#include "finsler/solutions.hpp"

namespace finsler {

struct CatalogParam {
    std::string name;
    double default_value = 0.0;
    std::string constraint;
};

/// Suggested (alpha, beta) for an entry.
struct ChartHint {
    enum class Kind { Euclidean, MuFamily };
    Kind kind = Kind::Euclidean;
    double mu = 0.0;     // MuFamily
    double shift = 0.0;  // Euclidean: b = x + shift e_1

    RiemannChart make(int n) const;
    std::string describe() const;
};

struct CatalogInfo {
    std::string name;
    std::string title;
    std::vector<CatalogParam> params;
    std::string f, g, Phi;   // sources in t
    std::string htilde;      // default h~(t)
    std::string closed_phi;  // human readable, without the h~ s term
    std::string note;
    std::vector<std::string> flags;
};

const std::vector<CatalogInfo>& catalog_entries();

struct CatalogOptions {
    std::map<std::string, double> params;
    std::optional<std::string> htilde;  // override h~(t)
    double perturb_Phi = 0.0;           // added to Phi (negative controls)
};

struct CatalogEntry {
    CatalogInfo info;
    std::map<std::string, double> params;  // resolved values
    SolutionSpec spec;
    std::optional<PhiSpec> closed;
    ChartHint chart;
    double b0 = std::numeric_limits<double>::infinity();
};

/// Throws InvalidArgument for an unknown name (message lists suggestions),
/// an unknown parameter or a parameter outside its constraint.
CatalogEntry catalog(const std::string& name, const CatalogOptions& options = {});

/// Known names closest to `name`.
std::vector<std::string> catalog_suggestions(const std::string& name);

}  // namespace finsler
