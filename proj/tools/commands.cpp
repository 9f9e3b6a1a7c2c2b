#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "bachvol/bachvol.hpp"

namespace bachvol::cli {
namespace {

constexpr int kMachineDigits = 17;
constexpr int kHumanDigits = 6;
constexpr const char* kLambdaMaxEnv = "BACHVOL_LAMBDA_MAX";
constexpr const char* kBatchHeader = "spot,strike,maturity,value,kind";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { text, json, csv };

// An input field echoed back verbatim, with its numeric reading if any.
struct Raw {
  std::string text;
  std::optional<double> number;
};

using Value = std::variant<double, std::string, Raw>;

struct Field {
  std::string name;
  Value value;
};

using Record = std::vector<Field>;

std::string format_number(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string json_number(double v) {
  return std::isfinite(v) ? format_number(v, kMachineDigits) : "null";
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string render(const Value& value, Format format) {
  if (const double* d = std::get_if<double>(&value)) {
    if (format == Format::json) return json_number(*d);
    return format_number(*d, format == Format::text ? kHumanDigits : kMachineDigits);
  }
  if (const std::string* s = std::get_if<std::string>(&value)) {
    return format == Format::json ? json_string(*s) : format == Format::csv ? csv_quote(*s) : *s;
  }
  const Raw& raw = std::get<Raw>(value);
  if (format == Format::json) return raw.number ? json_number(*raw.number) : json_string(raw.text);
  return format == Format::csv ? csv_quote(raw.text) : raw.text;
}

std::string json_object(const Record& record) {
  std::string s = "{";
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (i > 0) s += ",";
    s += json_string(record[i].name) + ":" + render(record[i].value, Format::json);
  }
  return s + "}";
}

void write_csv_line(std::ostream& os, const Record& record, bool header) {
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (i > 0) os << ',';
    os << (header ? record[i].name : render(record[i].value, Format::csv));
  }
  os << '\n';
}

void write_record(std::ostream& os, const Record& record, Format format) {
  switch (format) {
    case Format::json:
      os << json_object(record) << '\n';
      return;
    case Format::csv:
      write_csv_line(os, record, true);
      write_csv_line(os, record, false);
      return;
    case Format::text: {
      std::size_t width = 0;
      for (const Field& f : record) width = std::max(width, f.name.size());
      for (const Field& f : record) {
        os << f.name << std::string(width - f.name.size() + 2, ' ') << render(f.value, Format::text)
           << '\n';
      }
      return;
    }
  }
}

// Tables are CSV unless JSON is requested, since they are meant for machines.
void write_table(std::ostream& os, const std::vector<Record>& rows, Format format) {
  if (format == Format::json) {
    os << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) os << (i > 0 ? ",\n " : "") << json_object(rows[i]);
    os << "]\n";
    return;
  }
  if (rows.empty()) return;
  write_csv_line(os, rows.front(), true);
  for (const Record& r : rows) write_csv_line(os, r, false);
}

std::optional<double> parse_double(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

std::string describe(const Error& e) { return std::string(to_string(e.kind())) + ": " + e.what(); }

// ---------------------------------------------------------------------------
// Batch input

struct BatchRow {
  std::vector<std::string> fields;
};

std::vector<BatchRow> read_batch(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file " + path);
  std::string line;
  if (!std::getline(in, line)) throw UsageError("input file is empty: " + path);
  std::string header;
  for (const std::string& f : split_commas(line)) header += (header.empty() ? "" : ",") + f;
  if (header != kBatchHeader) {
    throw UsageError(std::string("input header must be ") + kBatchHeader);
  }
  std::vector<BatchRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back({split_commas(line)});
  }
  return rows;
}

struct ParsedRow {
  OptionTerms terms;
  double value;
  std::string kind;
};

ParsedRow parse_row(const BatchRow& row) {
  if (row.fields.size() != 5) throw UsageError("expected 5 fields");
  double numbers[4];
  static const char* const names[] = {"spot", "strike", "maturity", "value"};
  for (int i = 0; i < 4; ++i) {
    const auto v = parse_double(row.fields[i]);
    if (!v) throw UsageError(std::string("cannot parse ") + names[i]);
    numbers[i] = *v;
  }
  return {OptionTerms(numbers[0], numbers[1], numbers[2]), numbers[3], row.fields[4]};
}

// Evaluates each row independently; returns the exit code.
template <class Evaluate>
int run_batch(const std::vector<BatchRow>& rows, Evaluate evaluate, std::ostream& out, Format format) {
  std::vector<Record> table;
  std::size_t failures = 0;
  static const char* const columns[] = {"spot", "strike", "maturity", "value", "kind"};
  for (const BatchRow& row : rows) {
    Record record;
    for (std::size_t i = 0; i < 5; ++i) {
      const std::string text = i < row.fields.size() ? row.fields[i] : "";
      record.push_back({columns[i], Raw{text, i < 4 ? parse_double(text) : std::nullopt}});
    }
    Value result = std::string();
    std::string method;
    std::string error;
    try {
      const ParsedRow parsed = parse_row(row);
      auto [vol, how] = evaluate(parsed);
      result = vol;
      method = how;
    } catch (const Error& e) {
      error = describe(e);
    } catch (const UsageError& e) {
      error = std::string("parse: ") + e.what();
    }
    if (!error.empty()) ++failures;
    record.push_back({"result", result});
    record.push_back({"method", method});
    record.push_back({"error", error});
    table.push_back(std::move(record));
  }
  write_table(out, table, format);
  return !rows.empty() && failures == rows.size() ? kBatchFailed : kOk;
}

// ---------------------------------------------------------------------------
// Shared option plumbing

struct TermsOptions {
  std::optional<double> spot;
  std::optional<double> strike;
  std::optional<double> maturity;

  void add_to(CLI::App* app) {
    app->add_option("--spot", spot, "Spot (forward) price S");
    app->add_option("--strike", strike, "Strike K");
    app->add_option("--maturity", maturity, "Maturity T in years");
  }

  OptionTerms terms() const {
    if (!spot || !strike || !maturity) throw UsageError("--spot, --strike and --maturity are required");
    return OptionTerms(*spot, *strike, *maturity);
  }
};

Record terms_fields(const OptionTerms& t) {
  return {{"spot", t.spot()}, {"strike", t.strike()}, {"maturity", t.maturity()}};
}

void append(Record& record, const Record& more) { record.insert(record.end(), more.begin(), more.end()); }

Record greeks_fields(const std::string& prefix, const GreeksReport& g) {
  return {{prefix + "delta", g.delta},
          {prefix + "gamma", g.gamma},
          {prefix + "vega", g.vega},
          {prefix + "theta", g.theta},
          {prefix + "breakeven", g.breakeven}};
}

double resolve_lambda_max(const std::optional<double>& flag, const EnvLookup& env) {
  double value = kDefaultLambdaMax;
  if (flag) {
    value = *flag;
  } else if (const auto text = env(kLambdaMaxEnv)) {
    const auto parsed = parse_double(*text);
    if (!parsed) throw UsageError(std::string(kLambdaMaxEnv) + " is not a number: " + *text);
    value = *parsed;
  }
  if (!(value > 0.0 && value <= 1.0)) throw UsageError("lambda-max must lie in (0, 1]");
  return value;
}

ImpliedMethod parse_method(const std::string& name) {
  if (name == "exact") return ImpliedMethod::exact;
  if (name == "gamma") return ImpliedMethod::gamma;
  if (name == "asymptotic") return ImpliedMethod::asymptotic;
  return ImpliedMethod::automatic;
}

// ---------------------------------------------------------------------------
// Subcommands

struct PriceOptions {
  TermsOptions terms;
  std::string model = "bachelier";
  double vol = 0.0;
};

int cmd_price(const PriceOptions& o, std::ostream& out, Format format) {
  const OptionTerms t = o.terms.terms();
  Record record{{"model", o.model}};
  append(record, terms_fields(t));
  record.push_back({"vol", o.vol});
  if (o.model == "bachelier") {
    const NormalVol vol(o.vol);
    record.push_back({"price", bachelier_call(t, vol)});
    record.push_back({"time_value", bachelier_time_value(t, vol)});
    record.push_back({"time_value_gamma", bachelier_tv_gamma(t, vol)});
    record.push_back({"log_time_value", bachelier_log_time_value(t, vol)});
  } else {
    const LognormalVol vol(o.vol);
    record.push_back({"price", black_scholes_call(t, vol)});
    record.push_back({"time_value", black_scholes_time_value(t, vol)});
    record.push_back({"log_time_value", black_scholes_log_time_value(t, vol)});
  }
  write_record(out, record, format);
  return kOk;
}

struct ImpliedOptions {
  TermsOptions terms;
  std::optional<double> price;
  std::optional<double> time_value;
  std::string input;
  std::string method = "auto";
  std::optional<double> lambda_max;
};

int cmd_implied(const ImpliedOptions& o, std::ostream& out, Format format, const EnvLookup& env) {
  const double lambda_max = resolve_lambda_max(o.lambda_max, env);
  const ImpliedMethod method = parse_method(o.method);
  if (!o.input.empty()) {
    auto evaluate = [&](const ParsedRow& row) {
      if (row.kind != "price") throw UsageError("implied expects kind=price");
      const ImpliedResult r =
          implied_normal(TimeValueQuote::from_price(row.terms, row.value), method, lambda_max);
      return std::pair<double, std::string>(r.vol.value(), std::string(r.method));
    };
    return run_batch(read_batch(o.input), evaluate, out, format);
  }
  if (o.price.has_value() == o.time_value.has_value()) {
    throw UsageError("give exactly one of --price and --time-value");
  }
  const OptionTerms t = o.terms.terms();
  const TimeValueQuote quote = o.price ? TimeValueQuote::from_price(t, *o.price)
                                       : TimeValueQuote::from_time_value(t, *o.time_value);
  const ImpliedResult r = implied_normal(quote, method, lambda_max);
  Record record = terms_fields(t);
  record.push_back({"price", quote.price()});
  record.push_back({"time_value", quote.time_value()});
  record.push_back({"lambda", r.lambda});
  record.push_back({"normal_vol", r.vol.value()});
  record.push_back({"method", std::string(r.method)});
  write_record(out, record, format);
  return kOk;
}

struct ConvertOptions {
  TermsOptions terms;
  std::optional<double> vol;
  std::string input;
  std::string direction;
  std::string order = "exact";
};

double convert_one(const OptionTerms& t, double vol, const std::string& direction,
                   const std::string& order) {
  if (direction == "ln2n") {
    const LognormalVol v(vol);
    if (order == "0") return normal_from_lognormal_order0(t, v).value();
    if (order == "1") return normal_from_lognormal_order1(t, v).value();
    return exact_normal_from_lognormal(t, v).value();
  }
  const NormalVol v(vol);
  if (order == "0") return lognormal_from_normal_order0(t, v).value();
  if (order == "1") return lognormal_from_normal_order1(t, v).value();
  return exact_lognormal_from_normal(t, v).value();
}

std::string order_label(const std::string& order) { return order == "exact" ? order : "order" + order; }

int cmd_convert(const ConvertOptions& o, std::ostream& out, Format format) {
  const std::string label = order_label(o.order);
  if (!o.input.empty()) {
    const std::string expected_kind = o.direction == "ln2n" ? "lognormal_vol" : "normal_vol";
    auto evaluate = [&](const ParsedRow& row) {
      if (row.kind != expected_kind) throw UsageError(o.direction + " expects kind=" + expected_kind);
      return std::pair<double, std::string>(convert_one(row.terms, row.value, o.direction, o.order),
                                            label);
    };
    return run_batch(read_batch(o.input), evaluate, out, format);
  }
  if (!o.vol) throw UsageError("--vol is required without --input");
  const OptionTerms t = o.terms.terms();
  Record record = terms_fields(t);
  const bool to_normal = o.direction == "ln2n";
  record.push_back({to_normal ? "lognormal_vol" : "normal_vol", *o.vol});
  record.push_back({to_normal ? "normal_vol" : "lognormal_vol", convert_one(t, *o.vol, o.direction, o.order)});
  record.push_back({"method", label});
  write_record(out, record, format);
  return kOk;
}

struct GreeksOptions {
  TermsOptions terms;
  std::string model = "bachelier";
  double vol = 0.0;
  double dt = 1.0;
  bool compare = false;
};

int cmd_greeks(const GreeksOptions& o, std::ostream& out, Format format) {
  const OptionTerms t = o.terms.terms();
  Record record{{"model", o.model}};
  append(record, terms_fields(t));
  record.push_back({"dt", o.dt});
  if (!o.compare) {
    record.push_back({"vol", o.vol});
    const GreeksReport g = o.model == "bachelier" ? bachelier_greeks(t, NormalVol(o.vol), o.dt)
                                                  : black_scholes_greeks(t, LognormalVol(o.vol), o.dt);
    append(record, greeks_fields("", g));
    write_record(out, record, format);
    return kOk;
  }
  const NormalVol normal = o.model == "bachelier" ? NormalVol(o.vol)
                                                  : exact_normal_from_lognormal(t, LognormalVol(o.vol));
  const LognormalVol lognormal = o.model == "bachelier" ? exact_lognormal_from_normal(t, NormalVol(o.vol))
                                                        : LognormalVol(o.vol);
  record.push_back({"normal_vol", normal.value()});
  record.push_back({"lognormal_vol", lognormal.value()});
  append(record, greeks_fields("bachelier_", bachelier_greeks(t, normal, o.dt)));
  append(record, greeks_fields("black_scholes_", black_scholes_greeks(t, lognormal, o.dt)));
  const GreekRatios measured = measured_greek_ratios(t, normal, lognormal);
  const GreekRatios limits = t.at_the_money() ? GreekRatios{} : greek_ratio_limits(t);
  append(record, {{"ratio_delta", measured.delta},
                  {"ratio_vega", measured.vega},
                  {"ratio_gamma", measured.gamma},
                  {"ratio_theta", measured.theta},
                  {"limit_delta", limits.delta},
                  {"limit_vega", limits.vega},
                  {"limit_gamma", limits.gamma},
                  {"limit_theta", limits.theta}});
  write_record(out, record, format);
  return kOk;
}

struct SmileOptions {
  double m_min = 0.25;
  double m_max = 3.0;
  int steps = 200;
};

int cmd_smile(const SmileOptions& o, std::ostream& out, Format format) {
  if (!std::isfinite(o.m_min) || !std::isfinite(o.m_max) || !(o.m_min > 0.0) || !(o.m_max > o.m_min)) {
    throw UsageError("smile requires 0 < m-min < m-max");
  }
  if (o.steps < 1) throw UsageError("smile requires steps >= 1");
  std::vector<double> grid;
  for (int i = 0; i <= o.steps; ++i) grid.push_back(o.m_min + (o.m_max - o.m_min) * i / o.steps);
  // The curve is normalized at the money, so m = 1 is always emitted when in range.
  if (o.m_min < 1.0 && 1.0 < o.m_max && std::find(grid.begin(), grid.end(), 1.0) == grid.end()) {
    grid.insert(std::upper_bound(grid.begin(), grid.end(), 1.0), 1.0);
  }
  std::vector<Record> rows;
  for (double m : grid) {
    rows.push_back({{"m", m}, {"smile_shape", smile_shape(m)}, {"breakeven_ratio", breakeven_ratio(m)}});
  }
  write_table(out, rows, format == Format::json ? Format::json : Format::csv);
  return kOk;
}

}  // namespace

EnvLookup process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* value = std::getenv(name.c_str());
    if (value == nullptr) return std::nullopt;
    return std::string(value);
  };
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env) {
  CLI::App app{"Bachelier and Black-Scholes pricing, implied volatility and greeks", "bachvol"};
  app.require_subcommand(1);
  std::string format_name = "text";
  std::string output_path;
  app.add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--output", output_path, "Write output to this file instead of stdout");

  const auto models = CLI::IsMember({"bachelier", "black-scholes"});

  PriceOptions price;
  CLI::App* price_cmd = app.add_subcommand("price", "Price a call");
  price.terms.add_to(price_cmd);
  price_cmd->add_option("--model", price.model)->check(models)->capture_default_str();
  price_cmd->add_option("--vol", price.vol, "Volatility in the model's convention")->required();

  ImpliedOptions implied;
  CLI::App* implied_cmd = app.add_subcommand("implied", "Implied normal volatility");
  implied.terms.add_to(implied_cmd);
  implied_cmd->add_option("--price", implied.price, "Call price");
  implied_cmd->add_option("--time-value", implied.time_value, "Call time value C - (S - K)+");
  implied_cmd->add_option("--input", implied.input, "Batch CSV file");
  implied_cmd->add_option("--method", implied.method)
      ->check(CLI::IsMember({"exact", "gamma", "asymptotic", "auto"}))
      ->capture_default_str();
  implied_cmd->add_option("--lambda-max", implied.lambda_max,
                          "Largest lambda for the asymptotic route (overrides BACHVOL_LAMBDA_MAX)");

  ConvertOptions convert;
  CLI::App* convert_cmd = app.add_subcommand("convert", "Convert between normal and lognormal vols");
  convert.terms.add_to(convert_cmd);
  convert_cmd->add_option("--vol", convert.vol, "Volatility to convert");
  convert_cmd->add_option("--input", convert.input, "Batch CSV file");
  convert_cmd->add_option("--direction", convert.direction)
      ->check(CLI::IsMember({"n2ln", "ln2n"}))
      ->required();
  convert_cmd->add_option("--order", convert.order)
      ->check(CLI::IsMember({"0", "1", "exact"}))
      ->capture_default_str();

  GreeksOptions greeks;
  CLI::App* greeks_cmd = app.add_subcommand("greeks", "Greeks and breakeven move");
  greeks.terms.add_to(greeks_cmd);
  greeks_cmd->add_option("--model", greeks.model)->check(models)->capture_default_str();
  greeks_cmd->add_option("--vol", greeks.vol)->required();
  greeks_cmd->add_option("--dt", greeks.dt, "Breakeven horizon in years")->capture_default_str();
  greeks_cmd->add_flag("--compare", greeks.compare,
                       "Report both models with price-linked vols and their greek ratios");

  SmileOptions smile;
  CLI::App* smile_cmd = app.add_subcommand("smile", "Emit ln(m)/(m-1) and the breakeven ratio");
  smile_cmd->add_option("--m-min", smile.m_min)->capture_default_str();
  smile_cmd->add_option("--m-max", smile.m_max)->capture_default_str();
  smile_cmd->add_option("--steps", smile.steps)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  const Format format = format_name == "json" ? Format::json
                        : format_name == "csv" ? Format::csv
                                               : Format::text;
  std::unique_ptr<std::ofstream> file;
  try {
    if (!output_path.empty()) {
      file = std::make_unique<std::ofstream>(output_path);
      if (!*file) throw UsageError("cannot open output file " + output_path);
    }
    std::ostream& sink = file ? *file : out;
    if (price_cmd->parsed()) return cmd_price(price, sink, format);
    if (implied_cmd->parsed()) return cmd_implied(implied, sink, format, env);
    if (convert_cmd->parsed()) return cmd_convert(convert, sink, format);
    if (greeks_cmd->parsed()) return cmd_greeks(greeks, sink, format);
    return cmd_smile(smile, sink, format);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << describe(e) << '\n';
    return e.kind() == ErrorKind::numerical ? kNumerical : kValidation;
  }
}

}  // namespace bachvol::cli
