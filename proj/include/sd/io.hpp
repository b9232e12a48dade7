#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "sd/curves.hpp"
#include "sd/families.hpp"
#include "sd/heights.hpp"
#include "sd/measures.hpp"

namespace sd {

// --- literals ---------------------------------------------------------------
// Map literal: {"num": [c0,...,cd], "den": [c0,...,cd]} with integer or
// decimal-string entries, ascending powers of z.
RationalMap map_from_json(const nlohmann::json& j);
nlohmann::json map_to_json(const RationalMap& f);

// Curve literal: {"bidegree": [d1, d2], "coeffs": [[...], ...]} with row i
// holding the u-coefficients of x^i y^(d1-i).
CurveP1xP1 curve_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const CurveP1xP1& c);

// Family literal: {"degree": d, "num": [[t-poly], ...], "den": [...]} with
// optional "num2"/"den2" for split pairs; inner arrays ascend in t.
ParamFamily family_from_json(const nlohmann::json& j);

/// Worked-example aliases: z2, z2m2, z2p1, cheb3, lattes-i.
std::optional<RationalMap> builtin_map(const std::string& name);

/// Alias, else a JSON file path.
RationalMap load_map(const std::string& spec);
/// "diagonal", else a JSON file path.
CurveP1xP1 load_curve(const std::string& spec);
/// "z2pt" (the unicritical quadratic family), else a JSON file path.
ParamFamily load_family(const std::string& spec);

ProjPointQ parse_point(const std::string& s); // "p/q", "p", or "inf"
Rat parse_rational(const std::string& s);

// --- emission ---------------------------------------------------------------

/// Reals serialized with 17 significant digits, the round-trip format the
/// file contracts pin down.
std::string fmt_real(double v);

/// Hex SHA-1 of a git blob with the given content ("blob <len>\0" prefix).
std::string git_blob_hash(const std::string& content);

std::string measure_csv(const EmpiricalMeasure& mu);     // re,im,weight
std::string height_csv(const std::string& point_label, const HeightEstimate& h);
std::string energy_json(const MeasureEqualityReport& r); // {statistic, se, decision}
std::string dky_csv(const DkyTable& t);                  // t1,t2,count
std::string screen_json(const ScreenResult& r);          // tagged verdict + evidence

struct CurveScanRow {
    Rat t;
    double h_t;
    unsigned count;
    double min_height;
};
std::string curve_scan_csv(const std::vector<CurveScanRow>& rows); // t,h_t,count,min_height
std::string fit_csv(const HeightFit& fit);               // t-free support table
std::string points_csv(const std::vector<ProjPointC>& pts);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace sd
