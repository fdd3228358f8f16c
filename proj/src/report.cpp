#include "ostro/report.hpp"

namespace ostro::report {

using nlohmann::json;

json digits_json(const std::vector<Integer>& digits) {
    bool all_small = true;
    for (const Integer& d : digits)
        if (sgn(d) < 0 || !d.fits_ulong_p()) {
            all_small = false;
            break;
        }
    json arr = json::array();
    for (const Integer& d : digits) {
        if (all_small)
            arr.push_back(static_cast<std::uint64_t>(d.get_ui()));
        else
            arr.push_back(d.get_str());
    }
    return arr;
}

json rational_json(const Rational& x) { return to_fraction_string(x); }

namespace {

// Exact fractions up to a readable size; doubly-exponential denominators
// degrade to labeled decimal estimates.
constexpr std::size_t kCompactChars = 120;

} // namespace

void put_compact(json& row, const char* key, const Rational& x) {
    std::string s = to_fraction_string(x);
    if (s.size() <= kCompactChars) {
        row[key] = std::move(s);
    } else {
        row[std::string(key) + "_decimal"] = decimal_json(to_decimal(x, 24));
    }
}

json interval_json(const RationalInterval& iv) {
    return json{{"lo", rational_json(iv.lo)}, {"hi", rational_json(iv.hi)}};
}

json decimal_json(const Decimal& d) {
    return json{{"value", d.text}, {"precision", d.digits}};
}

json expand_o2_json(const Rational& x, const O2Digits& q, const BarO2Digits& d) {
    return json{{"schema", kSchema},       {"cmd", "expand"},
                {"system", "o2"},          {"x", rational_json(x)},
                {"q", digits_json(q.q)},   {"d", digits_json(d.d)},
                {"terminated", q.terminated}};
}

json expand_cf_json(const Rational& x, const CFDigits& cf) {
    return json{{"schema", kSchema},     {"cmd", "expand"}, {"system", "cf"},
                {"x", rational_json(x)}, {"a", digits_json(cf.a)},
                {"terminated", cf.terminated}};
}

json expand_pierce_json(const Rational& x, const PierceDigits& p) {
    return json{{"schema", kSchema},     {"cmd", "expand"},       {"system", "pierce"},
                {"x", rational_json(x)}, {"q", digits_json(p.q)}, {"g", digits_json(p.g)},
                {"terminated", p.terminated}};
}

json cylinder_json(const Cylinder& cyl) {
    return json{{"schema", kSchema},
                {"cmd", "cylinder"},
                {"d", digits_json(cyl.base.d)},
                {"companions", digits_json(cyl.companions.c)},
                {"rank", cyl.rank},
                {"parity", cyl.odd_rank ? "odd" : "even"},
                {"inf", rational_json(cyl.inf)},
                {"sup", rational_json(cyl.sup)},
                {"length", rational_json(cyl.length())}};
}

json transfer_json(const BarO2Digits& d, TransferTarget target, const TransferImage& image) {
    return json{{"schema", kSchema},
                {"cmd", "transfer"},
                {"d", digits_json(d.d)},
                {"target", target == TransferTarget::Pierce ? "pierce" : "cf"},
                {"point", image.point},
                {"lo", rational_json(image.interval.lo)},
                {"hi", rational_json(image.interval.hi)}};
}

json series_json(const SeriesReport& report) {
    json trace = json::array();
    for (const auto& entry : report.trace) {
        json row{{"k", entry.k}};
        put_compact(row, "term", entry.term);
        if (!entry.note.empty()) row["note"] = entry.note;
        trace.push_back(std::move(row));
    }
    json out{{"verdict", to_string(report.verdict)},
             {"partial_sum", rational_json(report.partial_sum)},
             {"trace", std::move(trace)},
             {"certificate", report.certificate}};
    if (report.k0) out["k0"] = *report.k0;
    return out;
}

json measure_json(const std::string& family, const MeasureBound& bound) {
    json trace = json::array();
    for (const auto& entry : bound.trace) {
        json row{{"k", entry.k}};
        put_compact(row, "term", entry.term);
        if (!entry.note.empty()) row["note"] = entry.note;
        trace.push_back(std::move(row));
    }
    json out{{"schema", kSchema},
             {"cmd", "measure"},
             {"family", family},
             {"depth", bound.depth},
             {"lower", rational_json(bound.lower)},
             {"upper", rational_json(bound.upper)},
             {"verdict", to_string(bound.verdict)},
             {"trace", std::move(trace)}};
    if (!bound.certificate.empty()) out["certificate"] = bound.certificate;
    if (!bound.note.empty()) out["note"] = bound.note;
    return out;
}

json covering_json(const CoveringReport& report) {
    json alphas = json::array();
    for (const auto& ar : report.alphas) {
        json sums = json::array();
        for (const auto& s : ar.sums) {
            json row{{"k", s.k}, {"exact", s.exact}};
            put_compact(row, "lo", s.value.lo);
            put_compact(row, "hi", s.value.hi);
            sums.push_back(std::move(row));
        }
        alphas.push_back(json{{"alpha", rational_json(ar.alpha)},
                              {"sums", std::move(sums)},
                              {"upper_bound_certified", ar.upper_bound_certified}});
    }
    json out{{"schema", kSchema},
             {"cmd", "dim"},
             {"family", report.family},
             {"alphas", std::move(alphas)},
             {"certificate", report.dim_zero_certificate},
             {"threshold", rational_json(report.threshold)},
             {"notes", report.certificate},
             {"references", json::array({"constants --set e2 for the continued-fraction "
                                         "bounded-digit comparison"})}};
    if (report.witness_base) out["witness_base"] = report.witness_base->get_str();
    return out;
}

json constants_json(const BoundedDigitReport& report) {
    json entries = json::array();
    for (const auto& e : report.e2_constants) {
        json row{{"source", e.source}};
        if (!e.lower.empty()) row["lower"] = e.lower;
        if (!e.upper.empty()) row["upper"] = e.upper;
        if (!e.value.empty()) row["value"] = e.value;
        entries.push_back(std::move(row));
    }
    return json{{"schema", kSchema},
                {"cmd", "constants"},
                {"set", "e2"},
                {"entries", std::move(entries)},
                {"bounded_digit_dimension",
                 json{{"alternating_series", report.o2_dimension},
                      {"continued_fraction", report.cf_dimension},
                      {"certified_bounds", digits_json(report.certified_bounds)}}}};
}

json path_json(const SampledPath& path, bool include_digits) {
    json out{{"seed", path.seed},
             {"law", path.law_text},
             {"depth", path.depth}};
    if (include_digits) out["digits"] = digits_json(path.digits.d);
    return out;
}

json frequency_json(const FrequencyReport& report, bool include_paths) {
    json out{{"schema", kSchema},
             {"cmd", "experiment"},
             {"type", "frequency"},
             {"law", report.law.to_string()},
             {"paths", report.n_paths},
             {"depth", report.depth},
             {"tracked", digits_json(report.tracked)},
             {"late_events", report.late_event_count},
             {"late_envelope", rational_json(report.envelope)},
             {"envelope_from_position", report.envelope_from_position}};
    json means = json::array();
    for (const auto& f : report.mean_frequency) means.push_back(rational_json(f));
    out["mean_frequency"] = std::move(means);
    if (include_paths) {
        json rows = json::array();
        for (const auto& stats : report.paths) {
            json counts = json::object();
            for (const auto& [digit, count] : stats.counts) counts[digit.get_str()] = count;
            rows.push_back(json{{"seed", stats.seed},
                                {"counts", std::move(counts)},
                                {"digits_head", digits_json(stats.digits_head)}});
        }
        out["per_path"] = std::move(rows);
    }
    return out;
}

json separation_json(const SeparationReport& report) {
    return json{{"schema", kSchema},
                {"cmd", "experiment"},
                {"type", "singularity"},
                {"group_a", report.group_a.to_string()},
                {"group_b", report.group_b.to_string()},
                {"digit", report.digit.get_str()},
                {"paths", report.n_paths},
                {"depth", report.depth},
                {"mean_a", rational_json(report.mean_a)},
                {"mean_b", rational_json(report.mean_b)},
                {"var_a", rational_json(report.var_a)},
                {"var_b", rational_json(report.var_b)},
                {"gap", rational_json(report.gap)},
                {"sigma_threshold", rational_json(report.sigma_threshold)},
                {"separation", report.separation_flag}};
}

json cdf_json(const Rational& x, const std::string& law, int depth,
              const RationalInterval& bracket) {
    return json{{"schema", kSchema},
                {"cmd", "cdf"},
                {"x", rational_json(x)},
                {"law", law},
                {"depth", depth},
                {"lo", rational_json(bracket.lo)},
                {"hi", rational_json(bracket.hi)},
                {"width", rational_json(bracket.width())}};
}

std::string to_line(const json& j) { return j.dump(); }

} // namespace ostro::report
