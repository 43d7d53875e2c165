#include "fairpot/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "fairpot/error.hpp"
#include "json.hpp"

namespace fairpot::io {

namespace {

constexpr std::string_view kScoreHeader = "id,score,label,group";
constexpr std::string_view kNA = "NA";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return fields;
    start = comma + 1;
  }
}

// Reads lines, dropping a trailing '\r' and skipping blank lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }
  std::size_t number() const noexcept { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(kNA); }

std::optional<double> parse_optional(std::string_view field, std::size_t line, const char* name) {
  if (field == kNA) return std::nullopt;
  auto v = parse_number(field);
  if (!v) throw ParseError(line, std::string("malformed ") + name + " '" + std::string(field) + "'");
  return v;
}

std::uint64_t expect_unsigned(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0))
    throw ValidationError("config key '" + key + "' must be a non-negative integer");
  return value.get<std::uint64_t>();
}

double expect_number(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number()) throw ValidationError("config key '" + key + "' must be a number");
  return value.get<double>();
}

std::string expect_string(const nlohmann::json& value, const std::string& key) {
  if (!value.is_string()) throw ValidationError("config key '" + key + "' must be a string");
  return value.get<std::string>();
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 10);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::optional<double> parse_number(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

ScoreSet parse_score_csv(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "missing header");
  if (line != kScoreHeader) throw ParseError(reader.number(), "expected header '" + std::string(kScoreHeader) + "'");

  std::vector<ScoredRecord> records;
  std::vector<std::string> ids;
  std::unordered_set<std::string> seen;
  while (reader.next(line)) {
    const auto n = reader.number();
    auto f = split_fields(line);
    if (f.size() != 4) throw ParseError(n, "expected 4 fields, got " + std::to_string(f.size()));
    if (f[0].empty()) throw ParseError(n, "empty id");
    auto score = parse_number(f[1]);
    if (!score) throw ParseError(n, "malformed score '" + std::string(f[1]) + "'");
    if (*score < 0.0 || *score > 1.0)
      throw ValidationError("line " + std::to_string(n) + ": score " + std::string(f[1]) + " outside [0,1]");
    if (f[2] != "0" && f[2] != "1") throw ParseError(n, "label must be 0 or 1");
    if (f[3] != "a" && f[3] != "b") throw ParseError(n, "group must be a or b");
    std::string id(f[0]);
    if (!seen.insert(id).second) throw ValidationError("line " + std::to_string(n) + ": duplicate id '" + id + "'");
    records.push_back({*score, static_cast<std::uint8_t>(f[2] == "1"), f[3] == "a" ? Group::A : Group::B});
    ids.push_back(std::move(id));
  }
  return ScoreSet(std::move(records), std::move(ids));
}

ScoreSet read_score_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_score_csv(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_score_csv(const ScoreSet& set, std::ostream& out) {
  out << kScoreHeader << '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& r = set[i];
    out << (set.ids().empty() ? "r" + std::to_string(i) : set.ids()[i]) << ',' << format_number(r.score) << ','
        << int(r.label) << ',' << to_char(r.group) << '\n';
  }
}

void write_score_file(const ScoreSet& set, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_score_csv(set, out);
  finish_output(out, path);
}

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "missing header");
  if (line != kSweepHeader) throw ParseError(reader.number(), "expected header '" + std::string(kSweepHeader) + "'");

  std::vector<SweepRow> rows;
  while (reader.next(line)) {
    const auto n = reader.number();
    auto f = split_fields(line);
    if (f.size() != 7) throw ParseError(n, "expected 7 fields, got " + std::to_string(f.size()));
    SweepRow row;
    row.method = std::string(f[0]);
    parse_method(row.method);
    row.lambda = parse_optional(f[1], n, "lambda");
    row.alpha = parse_optional(f[2], n, "alpha");
    if (f[3] == "mean") {
      row.kind = RowKind::Mean;
    } else if (f[3] == "se") {
      row.kind = RowKind::StdError;
    } else {
      int rep = 0;
      auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), rep);
      if (ec != std::errc() || ptr != f[3].data() + f[3].size() || rep < 0)
        throw ParseError(n, "replicate must be a non-negative integer, 'mean' or 'se'");
      row.replicate = rep;
    }
    row.accuracy = parse_optional(f[4], n, "accuracy");
    row.disparity = parse_optional(f[5], n, "disparity");
    if (f[6] != "0" && f[6] != "1") throw ParseError(n, "on_frontier must be 0 or 1");
    row.on_frontier = f[6] == "1";
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> read_sweep_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_sweep_csv(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << optional_number(r.lambda) << ',' << optional_number(r.alpha) << ',';
    switch (r.kind) {
      case RowKind::Replicate: out << r.replicate; break;
      case RowKind::Mean: out << "mean"; break;
      case RowKind::StdError: out << "se"; break;
    }
    out << ',' << optional_number(r.accuracy) << ',' << optional_number(r.disparity) << ','
        << (r.on_frontier ? '1' : '0') << '\n';
  }
}

void write_sweep_file(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_sweep_csv(rows, out);
  finish_output(out, path);
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::FairPot: return "fairpot";
    case Method::PostLogit: return "post-logit";
    case Method::Wasserstein: return "wasserstein";
    case Method::Unadjusted: return "unadjusted";
  }
  return "?";
}

std::string_view to_string(SweepMode m) { return m == SweepMode::Global ? "global" : "partial"; }
std::string_view to_string(Direction d) { return d == Direction::BToA ? "b_to_a" : "a_to_b"; }

Method parse_method(std::string_view s) {
  for (auto m : {Method::FairPot, Method::PostLogit, Method::Wasserstein, Method::Unadjusted})
    if (s == to_string(m)) return m;
  throw ValidationError("unknown method '" + std::string(s) + "'");
}

SweepMode parse_mode(std::string_view s) {
  if (s == "global") return SweepMode::Global;
  if (s == "partial") return SweepMode::Partial;
  throw ValidationError("unknown mode '" + std::string(s) + "'");
}

Direction parse_direction(std::string_view s) {
  if (s == "b_to_a") return Direction::BToA;
  if (s == "a_to_b") return Direction::AToB;
  throw ValidationError("unknown direction '" + std::string(s) + "'");
}

std::vector<double> default_lambdas() {
  std::vector<double> out;
  for (int k = 0; k <= 10; ++k) out.push_back(k / 10.0);
  return out;
}

void ExperimentConfig::validate() const {
  if (lambdas.empty()) throw ValidationError("lambdas must not be empty");
  for (double l : lambdas)
    if (!(l >= 0.0 && l <= 1.0)) throw ValidationError("every lambda must lie in [0, 1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ValidationError("split_ratio must lie in (0, 1)");
  if (n_samples < 2) throw ValidationError("n_samples must be at least 2");
  if (train_path.empty() != test_path.empty())
    throw ValidationError("train_path and test_path must be given together");
}

ExperimentConfig parse_config(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");

  ExperimentConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "lambdas") {
      if (!value.is_array()) throw ValidationError("config key 'lambdas' must be an array of numbers");
      c.lambdas.clear();
      for (const auto& v : value) c.lambdas.push_back(expect_number(v, key));
    } else if (key == "alpha") {
      c.alpha = expect_number(value, key);
    } else if (key == "mode") {
      c.mode = parse_mode(expect_string(value, key));
    } else if (key == "direction") {
      c.direction = parse_direction(expect_string(value, key));
    } else if (key == "method") {
      c.method = parse_method(expect_string(value, key));
    } else if (key == "seed") {
      c.seed = expect_unsigned(value, key);
    } else if (key == "bootstrap_n") {
      c.bootstrap_n = expect_unsigned(value, key);
    } else if (key == "split_ratio") {
      c.split_ratio = expect_number(value, key);
    } else if (key == "n_samples") {
      c.n_samples = expect_unsigned(value, key);
    } else if (key == "train_path") {
      c.train_path = expect_string(value, key);
    } else if (key == "test_path") {
      c.test_path = expect_string(value, key);
    } else if (key == "output_dir") {
      c.output_dir = expect_string(value, key);
    } else {
      throw ValidationError("unknown config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string dump_config(const ExperimentConfig& c) {
  nlohmann::ordered_json doc;
  doc["lambdas"] = c.lambdas;
  doc["alpha"] = c.alpha;
  doc["mode"] = to_string(c.mode);
  doc["direction"] = to_string(c.direction);
  doc["method"] = to_string(c.method);
  doc["seed"] = c.seed;
  doc["bootstrap_n"] = c.bootstrap_n;
  doc["split_ratio"] = c.split_ratio;
  doc["n_samples"] = c.n_samples;
  doc["train_path"] = c.train_path;
  doc["test_path"] = c.test_path;
  doc["output_dir"] = c.output_dir;
  return doc.dump(2) + "\n";
}

void write_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << dump_config(config);
  finish_output(out, path);
}

}  // namespace fairpot::io
