#ifndef OSTRO_REPORT_HPP
#define OSTRO_REPORT_HPP

#include <json.hpp>

#include "ostro/companions.hpp"
#include "ostro/hausdorff.hpp"
#include "ostro/measure.hpp"
#include "ostro/o2.hpp"
#include "ostro/sampler.hpp"

// Stable JSON rendering of every library result.  Schema rules:
//  - every top-level object carries "schema": "ostro/v1";
//  - rationals are "p/q" strings, never floats;
//  - decimal estimates appear with a sibling "precision" field;
//  - digit arrays are JSON numbers when every entry fits an unsigned 64-bit
//    integer, otherwise decimal strings.
namespace ostro::report {

inline constexpr const char* kSchema = "ostro/v1";

nlohmann::json digits_json(const std::vector<Integer>& digits);
nlohmann::json rational_json(const Rational& x);

// Writes `key` as an exact fraction when readable, otherwise as
// `key_decimal` with a stated precision.
void put_compact(nlohmann::json& row, const char* key, const Rational& x);
nlohmann::json interval_json(const RationalInterval& iv);
nlohmann::json decimal_json(const Decimal& d);

nlohmann::json expand_o2_json(const Rational& x, const O2Digits& q, const BarO2Digits& d);
nlohmann::json expand_cf_json(const Rational& x, const CFDigits& cf);
nlohmann::json expand_pierce_json(const Rational& x, const PierceDigits& p);
nlohmann::json cylinder_json(const Cylinder& cyl);
nlohmann::json transfer_json(const BarO2Digits& d, TransferTarget target,
                             const TransferImage& image);
nlohmann::json series_json(const SeriesReport& report);
nlohmann::json measure_json(const std::string& family, const MeasureBound& bound);
nlohmann::json covering_json(const CoveringReport& report);
nlohmann::json constants_json(const BoundedDigitReport& report);
nlohmann::json path_json(const SampledPath& path, bool include_digits);
nlohmann::json frequency_json(const FrequencyReport& report, bool include_paths);
nlohmann::json separation_json(const SeparationReport& report);
nlohmann::json cdf_json(const Rational& x, const std::string& law, int depth,
                        const RationalInterval& bracket);

// Compact single-line rendering used for golden files and reproducibility
// comparisons.
std::string to_line(const nlohmann::json& j);

} // namespace ostro::report

#endif
