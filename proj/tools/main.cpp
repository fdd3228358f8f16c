// ostro: exact alternating-Ostrogradsky expansion toolkit.
//
// Every subcommand prints a single JSON object (or JSON lines for multi-path
// output) on stdout; diagnostics go to stderr.  Exit codes: 0 success,
// 1 domain/validity error, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ostro/companions.hpp"
#include "ostro/errors.hpp"
#include "ostro/family.hpp"
#include "ostro/hausdorff.hpp"
#include "ostro/measure.hpp"
#include "ostro/o2.hpp"
#include "ostro/report.hpp"
#include "ostro/sampler.hpp"

namespace {

using nlohmann::json;
using namespace ostro;

std::vector<Integer> parse_digit_list(const std::string& text) {
    std::vector<Integer> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw DomainError("empty digit in list: " + text);
        out.push_back(Integer(item));
    }
    if (out.empty()) throw DomainError("empty digit list");
    return out;
}

struct Config {
    int depth = 6;
    int horizon = 12;
    int jobs = 1;
    long enum_budget = 1'000'000;
    Rational sigma{5};
};

Config load_config(const std::string& path) {
    Config cfg;
    if (const char* env = std::getenv("OSTRO_JOBS")) cfg.jobs = std::max(1, std::atoi(env));
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "depth") cfg.depth = std::stoi(value);
        else if (key == "horizon") cfg.horizon = std::stoi(value);
        else if (key == "jobs") cfg.jobs = std::stoi(value);
        else if (key == "enum_budget") cfg.enum_budget = std::stol(value);
        else if (key == "sigma") cfg.sigma = parse_rational(value);
    }
    return cfg;
}

// CSV rendering: arrays of flat objects become rows; everything else becomes
// key,value lines.
void print_csv(const json& j, std::ostream& os) {
    const json* table = nullptr;
    for (const char* key : {"trace", "entries", "per_path", "sums"}) {
        if (j.contains(key) && j[key].is_array() && !j[key].empty()) {
            table = &j[key];
            break;
        }
    }
    if (table) {
        std::vector<std::string> cols;
        for (const auto& row : *table)
            for (auto it = row.begin(); it != row.end(); ++it)
                if (std::find(cols.begin(), cols.end(), it.key()) == cols.end())
                    cols.push_back(it.key());
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
        os << "\n";
        for (const auto& row : *table) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (i) os << ",";
                if (row.contains(cols[i])) {
                    const auto& cell = row[cols[i]];
                    os << (cell.is_string() ? cell.get<std::string>() : cell.dump());
                }
            }
            os << "\n";
        }
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        os << it.key() << ","
           << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
}

void emit(const json& j, const std::string& format) {
    if (format == "csv")
        print_csv(j, std::cout);
    else
        std::cout << report::to_line(j) << "\n";
}

LawSpec parse_law_spec(const std::string& text) {
    LawSpec spec;
    if (text == "lebesgue") {
        spec.kind = PathLaw::Lebesgue;
    } else {
        spec.kind = PathLaw::IID;
        spec.law = DigitLaw::parse(text);
    }
    return spec;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact second-Ostrogradsky expansion toolkit"};
    app.require_subcommand(1);

    std::string format = "json";
    std::string config_path;
    int jobs_flag = 0;
    app.add_option("--format", format, "output format: json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--jobs", jobs_flag, "worker cap for parallel enumeration/sampling");

    // expand
    auto* cmd_expand = app.add_subcommand("expand", "digit expansion of a rational");
    std::string opt_x, opt_system = "o2";
    int opt_max_terms = 48;
    bool opt_alternate = false;
    cmd_expand->add_option("--x", opt_x, "rational in (0,1), as p/q or decimal")->required();
    cmd_expand->add_option("--system", opt_system, "o2 | cf | pierce")
        ->check(CLI::IsMember({"o2", "cf", "pierce"}));
    cmd_expand->add_option("--max-terms", opt_max_terms);
    cmd_expand->add_flag("--alternate", opt_alternate,
                         "also print the second finite representation (o2 only)");

    // eval
    auto* cmd_eval = app.add_subcommand("eval", "exact partial sum of a digit sequence");
    std::string eval_q, eval_d, eval_a, eval_g;
    long eval_n = -1;
    cmd_eval->add_option("--q", eval_q, "raw alternating-series digits, comma separated");
    cmd_eval->add_option("--d", eval_d, "difference-form digits");
    cmd_eval->add_option("--a", eval_a, "continued-fraction partial quotients");
    cmd_eval->add_option("--g", eval_g, "Pierce difference digits");
    cmd_eval->add_option("--n", eval_n, "number of terms (default: all)");

    // convert
    auto* cmd_convert = app.add_subcommand("convert", "digit-form conversions");
    std::string conv_q, conv_d;
    cmd_convert->add_option("--q", conv_q, "raw digits -> difference form");
    cmd_convert->add_option("--d", conv_d, "difference digits -> raw form");

    // cylinder
    auto* cmd_cyl = app.add_subcommand("cylinder", "exact cylinder interval of a digit prefix");
    std::string cyl_d;
    cmd_cyl->add_option("--d", cyl_d, "difference-form digit prefix")->required();

    // shift
    auto* cmd_shift = app.add_subcommand("shift", "drop leading digits");
    std::string shift_d;
    int shift_count = 1;
    cmd_shift->add_option("--d", shift_d)->required();
    cmd_shift->add_option("--count", shift_count);

    // freq
    auto* cmd_freq = app.add_subcommand("freq", "digit occurrence count");
    std::string freq_d, freq_digit;
    long freq_n = -1;
    cmd_freq->add_option("--d", freq_d)->required();
    cmd_freq->add_option("--digit", freq_digit)->required();
    cmd_freq->add_option("--n", freq_n);

    // cf / pierce convenience commands
    auto* cmd_cf = app.add_subcommand("cf", "continued fraction expansion with convergents");
    std::string cf_x;
    int cf_max_terms = 64;
    cmd_cf->add_option("--x", cf_x)->required();
    cmd_cf->add_option("--max-terms", cf_max_terms);

    auto* cmd_pierce = app.add_subcommand("pierce", "Pierce expansion with growth statistics");
    std::string pierce_x;
    int pierce_max_terms = 64;
    cmd_pierce->add_option("--x", pierce_x)->required();
    cmd_pierce->add_option("--max-terms", pierce_max_terms);

    // transfer
    auto* cmd_transfer = app.add_subcommand("transfer", "digit-transfer map image");
    std::string transfer_d, transfer_target;
    bool transfer_terminated = false;
    cmd_transfer->add_option("--d", transfer_d)->required();
    cmd_transfer->add_option("--target", transfer_target)
        ->required()
        ->check(CLI::IsMember({"cf", "pierce"}));
    cmd_transfer->add_flag("--terminated", transfer_terminated,
                           "treat the digits as a complete expansion");

    // family
    auto* cmd_family = app.add_subcommand("family", "parse and validate a digit family");
    std::string family_text;
    cmd_family->add_option("--spec", family_text)->required();

    // measure
    auto* cmd_measure = app.add_subcommand("measure", "certified Lebesgue-measure bounds");
    std::string measure_family;
    int measure_depth = -1, measure_horizon = -1;
    bool measure_levels = false;
    cmd_measure->add_option("--family", measure_family)->required();
    cmd_measure->add_option("--depth", measure_depth);
    cmd_measure->add_option("--horizon", measure_horizon);
    cmd_measure->add_flag("--levels", measure_levels,
                          "include exact per-level measure bounds");

    // dim
    auto* cmd_dim = app.add_subcommand("dim", "covering sums and dimension certificates");
    std::string dim_family, dim_alphas = "1/10";
    int dim_depth = 10;
    cmd_dim->add_option("--family", dim_family)->required();
    cmd_dim->add_option("--alpha", dim_alphas, "comma-separated rational exponents");
    cmd_dim->add_option("--depth", dim_depth);

    // sample
    auto* cmd_sample = app.add_subcommand("sample", "seeded digit paths");
    std::string sample_law = "lebesgue", sample_track = "1,2,3,4,5";
    std::uint64_t sample_seed = 0;
    int sample_depth = 24, sample_paths = 1;
    bool sample_digits = false;
    cmd_sample->add_option("--law", sample_law, "lebesgue | geometric:R | point:I | finite:...");
    cmd_sample->add_option("--seed", sample_seed)->required();
    cmd_sample->add_option("--depth", sample_depth);
    cmd_sample->add_option("--paths", sample_paths);
    cmd_sample->add_option("--track", sample_track);
    cmd_sample->add_flag("--digits", sample_digits, "include the digit arrays");

    // cdf
    auto* cmd_cdf = app.add_subcommand("cdf", "distribution function bracket of the random expansion");
    std::string cdf_x, cdf_law;
    int cdf_depth = 24;
    cmd_cdf->add_option("--x", cdf_x)->required();
    cmd_cdf->add_option("--law", cdf_law)->required();
    cmd_cdf->add_option("--depth", cdf_depth);

    // experiment
    auto* cmd_exp = app.add_subcommand("experiment", "statistical experiments");
    std::string exp_type, exp_law = "lebesgue", exp_law_a = "geometric:1/2",
                exp_law_b = "lebesgue", exp_track = "1,2,3,4,5", exp_sigma = "5";
    std::uint64_t exp_seed = 0;
    int exp_paths = 100, exp_depth = 24;
    bool exp_per_path = false;
    cmd_exp->add_option("--type", exp_type)->required()
        ->check(CLI::IsMember({"frequency", "singularity"}));
    cmd_exp->add_option("--law", exp_law);
    cmd_exp->add_option("--law-a", exp_law_a);
    cmd_exp->add_option("--law-b", exp_law_b);
    cmd_exp->add_option("--seed", exp_seed)->required();
    cmd_exp->add_option("--paths", exp_paths);
    cmd_exp->add_option("--depth", exp_depth);
    cmd_exp->add_option("--track", exp_track);
    cmd_exp->add_option("--sigma", exp_sigma);
    cmd_exp->add_flag("--per-path", exp_per_path);

    // constants
    auto* cmd_const = app.add_subcommand("constants", "reference constants");
    std::string const_set = "e2";
    cmd_const->add_option("--set", const_set)->check(CLI::IsMember({"e2"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        Config cfg = load_config(config_path);
        if (jobs_flag > 0) cfg.jobs = jobs_flag;
        EnumBudget budget;
        budget.max_cylinders = cfg.enum_budget;
        budget.jobs = cfg.jobs;

        if (cmd_expand->parsed()) {
            Rational x = parse_rational(opt_x);
            if (opt_system == "cf") {
                emit(report::expand_cf_json(x, cf_expand(x, opt_max_terms)), format);
            } else if (opt_system == "pierce") {
                emit(report::expand_pierce_json(x, pierce_expand(x, opt_max_terms)), format);
            } else {
                O2Digits q = remez_expand(x, opt_max_terms);
                BarO2Digits d = o2_to_bar(q);
                json out = report::expand_o2_json(x, q, d);
                if (opt_alternate) {
                    O2Digits alt = alternate_representation(q);
                    out["alternate_q"] = report::digits_json(alt.q);
                }
                emit(out, format);
            }
        } else if (cmd_eval->parsed()) {
            json out{{"schema", report::kSchema}, {"cmd", "eval"}};
            Rational value;
            if (!eval_q.empty()) {
                O2Digits digits{parse_digit_list(eval_q), true};
                std::size_t n = eval_n < 0 ? digits.size() : static_cast<std::size_t>(eval_n);
                value = evaluate_o2(digits, n);
                out["system"] = "o2";
                out["n"] = n;
            } else if (!eval_d.empty()) {
                BarO2Digits d{parse_digit_list(eval_d), true};
                auto [q, c] = bar_to_o2(d);
                std::size_t n = eval_n < 0 ? q.size() : static_cast<std::size_t>(eval_n);
                value = evaluate_o2(q, n);
                out["system"] = "bar-o2";
                out["n"] = n;
            } else if (!eval_a.empty()) {
                CFDigits cf{parse_digit_list(eval_a), true};
                std::size_t n = eval_n < 0 ? cf.size() : static_cast<std::size_t>(eval_n);
                value = cf_evaluate(cf, n);
                out["system"] = "cf";
                out["n"] = n;
            } else if (!eval_g.empty()) {
                PierceDigits p = pierce_from_differences(parse_digit_list(eval_g), true);
                std::size_t n = eval_n < 0 ? p.size() : static_cast<std::size_t>(eval_n);
                value = pierce_evaluate(p, n);
                out["system"] = "pierce";
                out["n"] = n;
            } else {
                throw DomainError("eval needs one of --q/--d/--a/--g");
            }
            out["value"] = report::rational_json(value);
            emit(out, format);
        } else if (cmd_convert->parsed()) {
            if (!conv_q.empty()) {
                O2Digits q{parse_digit_list(conv_q), true};
                BarO2Digits d = o2_to_bar(q);
                auto [q2, c] = bar_to_o2(d);
                emit(json{{"schema", report::kSchema},
                          {"cmd", "convert"},
                          {"q", report::digits_json(q.q)},
                          {"d", report::digits_json(d.d)},
                          {"c", report::digits_json(c.c)}},
                     format);
            } else if (!conv_d.empty()) {
                BarO2Digits d{parse_digit_list(conv_d), true};
                auto [q, c] = bar_to_o2(d);
                emit(json{{"schema", report::kSchema},
                          {"cmd", "convert"},
                          {"q", report::digits_json(q.q)},
                          {"d", report::digits_json(d.d)},
                          {"c", report::digits_json(c.c)}},
                     format);
            } else {
                throw DomainError("convert needs --q or --d");
            }
        } else if (cmd_cyl->parsed()) {
            BarO2Digits d{parse_digit_list(cyl_d), false};
            emit(report::cylinder_json(cylinder_interval(d)), format);
        } else if (cmd_shift->parsed()) {
            BarO2Digits d{parse_digit_list(shift_d), false};
            for (int i = 0; i < shift_count; ++i) d = shift(d);
            emit(json{{"schema", report::kSchema},
                      {"cmd", "shift"},
                      {"count", shift_count},
                      {"d", report::digits_json(d.d)}},
                 format);
        } else if (cmd_freq->parsed()) {
            BarO2Digits d{parse_digit_list(freq_d), false};
            std::size_t n = freq_n < 0 ? d.size() : static_cast<std::size_t>(freq_n);
            Integer digit(freq_digit);
            std::size_t count = digit_count(d, digit, n);
            emit(json{{"schema", report::kSchema},
                      {"cmd", "freq"},
                      {"digit", digit.get_str()},
                      {"n", n},
                      {"count", count},
                      {"frequency", report::rational_json(
                                        make_rational(Integer(count), Integer(n)))}},
                 format);
        } else if (cmd_cf->parsed()) {
            Rational x = parse_rational(cf_x);
            CFDigits cf = cf_expand(x, cf_max_terms);
            json conv = json::array();
            for (const auto& [p, q] : cf_convergents(cf))
                conv.push_back(report::rational_json(make_rational(p, q)));
            json out = report::expand_cf_json(x, cf);
            out["cmd"] = "cf";
            out["convergents"] = std::move(conv);
            emit(out, format);
        } else if (cmd_pierce->parsed()) {
            Rational x = parse_rational(pierce_x);
            PierceDigits p = pierce_expand(x, pierce_max_terms);
            json out = report::expand_pierce_json(x, p);
            out["cmd"] = "pierce";
            if (p.size() >= 2) {
                json roots = json::array();
                for (const auto& stat : pierce_growth_stat(p, 16))
                    roots.push_back(json{{"n", stat.n}, {"root", stat.root.text},
                                         {"precision", stat.root.digits}});
                out["growth"] = std::move(roots);
            }
            emit(out, format);
        } else if (cmd_transfer->parsed()) {
            BarO2Digits d{parse_digit_list(transfer_d), transfer_terminated};
            TransferTarget target =
                transfer_target == "cf" ? TransferTarget::ContinuedFraction : TransferTarget::Pierce;
            emit(report::transfer_json(d, target, transfer_map(d, target)), format);
        } else if (cmd_family->parsed()) {
            DigitFamily fam = parse_family(family_text);
            json values = json::array();
            auto first_values = [&](const Sequence& s) {
                json arr = json::array();
                for (long k = 1; k <= 8; ++k) arr.push_back(s.at(k).get_str());
                return arr;
            };
            std::string kind;
            if (const auto* t = std::get_if<TailFamily>(&fam)) {
                kind = "tail";
                values = first_values(t->v);
            } else if (const auto* p = std::get_if<PrefixFamily>(&fam)) {
                kind = "prefix";
                values = first_values(p->m);
            } else {
                kind = "complement";
                values = first_values(*std::get<ComplementFamily>(fam).b);
            }
            emit(json{{"schema", report::kSchema},
                      {"cmd", "family"},
                      {"family", family_to_string(fam)},
                      {"kind", kind},
                      {"first_values", std::move(values)}},
                 format);
        } else if (cmd_measure->parsed()) {
            DigitFamily fam = parse_family(measure_family);
            int depth = measure_depth > 0 ? measure_depth : cfg.depth;
            int horizon = measure_horizon > 0 ? measure_horizon : cfg.horizon;
            MeasureBound bound = measure_bounds(fam, depth, horizon, budget);
            json out = report::measure_json(family_to_string(fam), bound);
            if (const auto* tf = std::get_if<TailFamily>(&fam)) {
                // the comparative root test for the Pierce-series system
                PierceZeroReport o1 = pierce_growth_zero_test(*tf, horizon);
                json o1j{{"verdict", to_string(o1.verdict)}};
                if (!o1.certificate.empty()) o1j["certificate"] = o1.certificate;
                if (!o1.note.empty()) o1j["note"] = o1.note;
                out["o1_root_test"] = std::move(o1j);
            }
            if (measure_levels) {
                json levels = json::array();
                for (const auto& lm : exact_level_measures(fam, depth, budget)) {
                    json row{{"k", lm.k}};
                    report::put_compact(row, "lo", lm.f_k.lo);
                    report::put_compact(row, "hi", lm.f_k.hi);
                    if (lm.removed_ratio) {
                        report::put_compact(row, "removed_ratio_lo", lm.removed_ratio->lo);
                        report::put_compact(row, "removed_ratio_hi", lm.removed_ratio->hi);
                    }
                    levels.push_back(std::move(row));
                }
                out["levels"] = std::move(levels);
            }
            emit(out, format);
        } else if (cmd_dim->parsed()) {
            DigitFamily fam = parse_family(dim_family);
            const auto* pf = std::get_if<PrefixFamily>(&fam);
            if (!pf) throw DomainError("dim expects a prefix family");
            std::vector<Rational> alphas;
            std::stringstream ss(dim_alphas);
            std::string item;
            while (std::getline(ss, item, ',')) alphas.push_back(parse_rational(item));
            emit(report::covering_json(certify_zero_dim(*pf, alphas, dim_depth)), format);
        } else if (cmd_sample->parsed()) {
            LawSpec spec = parse_law_spec(sample_law);
            std::vector<Integer> tracked = parse_digit_list(sample_track);
            std::vector<Rational> totals(tracked.size(), Rational(0));
            for (int i = 0; i < sample_paths; ++i) {
                std::uint64_t seed = sample_paths == 1
                                         ? sample_seed
                                         : path_seed(sample_seed, static_cast<std::uint64_t>(i));
                SampledPath path = spec.kind == PathLaw::Lebesgue
                                       ? lebesgue_digit_sample(seed, sample_depth)
                                       : iid_sample(*spec.law, seed, sample_depth);
                json row = report::path_json(path, sample_digits);
                json counts = json::object();
                json freqs = json::object();
                for (std::size_t t = 0; t < tracked.size(); ++t) {
                    std::size_t c = digit_count(path.digits, tracked[t], path.digits.size());
                    counts[tracked[t].get_str()] = c;
                    Rational f = make_rational(Integer(c), Integer(sample_depth));
                    totals[t] += f;
                    freqs[tracked[t].get_str()] = report::rational_json(f);
                }
                row["counts"] = std::move(counts);
                row["freqs"] = std::move(freqs);
                std::cout << report::to_line(row) << "\n";
            }
            json mean = json::object();
            for (std::size_t t = 0; t < tracked.size(); ++t)
                mean[tracked[t].get_str()] =
                    report::rational_json(totals[t] / Rational(sample_paths));
            std::cout << report::to_line(json{{"schema", report::kSchema},
                                              {"cmd", "sample"},
                                              {"aggregate", true},
                                              {"paths", sample_paths},
                                              {"law", spec.to_string()},
                                              {"depth", sample_depth},
                                              {"mean_freqs", std::move(mean)}})
                      << "\n";
        } else if (cmd_cdf->parsed()) {
            Rational x = parse_rational(cdf_x);
            DigitLaw law = DigitLaw::parse(cdf_law);
            emit(report::cdf_json(x, law.to_string(), cdf_depth, eta_cdf(x, law, cdf_depth)),
                 format);
        } else if (cmd_exp->parsed()) {
            if (exp_type == "frequency") {
                LawSpec spec = parse_law_spec(exp_law);
                FrequencyReport rep = frequency_experiment(
                    spec, exp_paths, exp_depth, parse_digit_list(exp_track), exp_seed, cfg.jobs);
                emit(report::frequency_json(rep, exp_per_path), format);
            } else {
                Rational sigma = cmd_exp->count("--sigma") ? parse_rational(exp_sigma) : cfg.sigma;
                SeparationReport rep = singularity_diagnostic(
                    parse_law_spec(exp_law_a), parse_law_spec(exp_law_b), exp_paths, exp_depth,
                    exp_seed, sigma, cfg.jobs);
                emit(report::separation_json(rep), format);
            }
        } else if (cmd_const->parsed()) {
            emit(report::constants_json(bounded_digit_report()), format);
        }
        return 0;
    } catch (const ParseError& e) {
        std::cerr << json{{"error", "parse"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const BudgetExceeded& e) {
        std::cerr << json{{"error", "budget"},
                          {"message", e.what()},
                          {"max_depth", e.max_depth}}
                         .dump()
                  << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "domain"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}
