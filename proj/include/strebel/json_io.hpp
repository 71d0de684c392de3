#pragma once

#include <string>

#include "json.hpp"
#include "strebel/constructions.hpp"

namespace strebel {

using Json = nlohmann::json;

/// x rounded to 12 significant digits; the JSON writer prints the shortest
/// round-trip form of the rounded value, so reports are byte-stable.
double round12(double x);

Json to_json(Complex z);
Json to_json(const SpherePoint& p);
Json to_json(const ChartPoint& p);
Json to_json(const std::vector<DivisorEntry>& divisor);
Json to_json(const Trajectory& t);
Json to_json(const CriticalGraph& g);
Json to_json(const PeriodTable& t);
Json to_json(const HyperellipticSpec& h);
Json to_json(const EllipticSlopeReport& r);
Json to_json(const CoverSolution& s);
Json to_json(const CoverPeriodReport& r);

/// {divisor, perimeters, verdict, periods}; periods is null unless Strebel.
Json analysis_report(const QuadDiff& w, const CriticalGraph& g);

/// Two-space indented, keys sorted, trailing newline.
std::string dump(const Json& j);

}  // namespace strebel
