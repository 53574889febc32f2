#include "rankmetrics/scoreset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "rankmetrics/error.hpp"
#include "rankmetrics/format.hpp"

namespace rankmetrics {

namespace {

constexpr std::string_view kHeader[] = {"dataset", "metric", "system", "utterance", "score"};

std::string describe_cell(std::string_view metric, std::string_view system,
                          std::string_view utterance) {
  std::string out = "(metric=";
  out.append(metric).append(", system=").append(system).append(", utterance=");
  out.append(utterance).append(")");
  return out;
}

// Splits one CSV record. Quoted fields may contain commas and doubled quotes,
// not newlines.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      if (!field.empty() || was_quoted) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": stray quote inside field");
      }
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      if (was_quoted) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": text after closing quote");
      }
      field.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> sorted_unique(std::vector<std::string> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::unordered_map<std::string, std::size_t> index_of(const std::vector<std::string>& values) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < values.size(); ++i) index.emplace(values[i], i);
  return index;
}

}  // namespace

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::Human ? "human" : "automatic";
}

std::string_view to_string(Orientation orientation) {
  return orientation == Orientation::HigherBetter ? "higher_better" : "lower_better";
}

bool operator==(const MetricProfile& a, const MetricProfile& b) {
  return a.id == b.id && a.kind == b.kind && a.orientation == b.orientation &&
         a.release_date == b.release_date && a.family == b.family;
}

ScoreTensor::ScoreTensor(std::string dataset_id, std::vector<MetricProfile> metrics,
                         std::vector<std::string> systems, std::vector<std::string> utterances,
                         std::vector<double> scores)
    : dataset_id_(std::move(dataset_id)),
      metrics_(std::move(metrics)),
      systems_(std::move(systems)),
      utterances_(std::move(utterances)),
      scores_(std::move(scores)) {
  if (metrics_.empty() || systems_.empty() || utterances_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "score tensor needs at least one metric, system and utterance");
  }
  if (scores_.size() != metrics_.size() * systems_.size() * utterances_.size()) {
    throw Error(ErrorCode::InvalidArgument, "score count does not match tensor shape");
  }
  std::set<std::string_view> ids;
  for (const auto& m : metrics_) {
    if (m.id.empty()) throw Error(ErrorCode::InvalidArgument, "empty metric id");
    if (!ids.insert(m.id).second) throw Error(ErrorCode::InvalidArgument, "duplicate metric id " + m.id);
  }
  if (sorted_unique(systems_).size() != systems_.size()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate system label");
  }
  if (sorted_unique(utterances_).size() != utterances_.size()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate utterance label");
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!std::isfinite(scores_[i])) {
      const std::size_t k = i % utterances_.size();
      const std::size_t s = (i / utterances_.size()) % systems_.size();
      const std::size_t m = i / (utterances_.size() * systems_.size());
      throw Error(ErrorCode::NonFiniteScore,
                  "non-finite score at " + describe_cell(metrics_[m].id, systems_[s], utterances_[k]));
    }
  }
}

std::size_t ScoreTensor::metric_index(std::string_view id) const {
  for (std::size_t i = 0; i < metrics_.size(); ++i) {
    if (metrics_[i].id == id) return i;
  }
  throw Error(ErrorCode::UnknownMetric, "metric '" + std::string(id) + "' not in dataset");
}

std::vector<double> ScoreTensor::systems_on_utterance(std::size_t metric, std::size_t utterance) const {
  std::vector<double> out(systems_.size());
  for (std::size_t s = 0; s < systems_.size(); ++s) out[s] = at(metric, s, utterance);
  return out;
}

std::span<const double> ScoreTensor::utterances_of_system(std::size_t metric, std::size_t system) const {
  const std::size_t k = utterances_.size();
  return std::span<const double>(scores_).subspan((metric * systems_.size() + system) * k, k);
}

ScoreTensor ScoreTensor::select_metrics(std::span<const std::string> ids) const {
  std::vector<MetricProfile> profiles;
  std::vector<double> scores;
  const std::size_t block = systems_.size() * utterances_.size();
  for (const auto& id : ids) {
    const std::size_t m = metric_index(id);
    profiles.push_back(metrics_[m]);
    scores.insert(scores.end(), scores_.begin() + static_cast<std::ptrdiff_t>(m * block),
                  scores_.begin() + static_cast<std::ptrdiff_t>((m + 1) * block));
  }
  return ScoreTensor(dataset_id_, std::move(profiles), systems_, utterances_, std::move(scores));
}

bool operator==(const ScoreTensor& a, const ScoreTensor& b) {
  return a.dataset_id_ == b.dataset_id_ && a.metrics_ == b.metrics_ && a.systems_ == b.systems_ &&
         a.utterances_ == b.utterances_ && a.scores_ == b.scores_;
}

std::vector<LongRow> parse_long_table(std::istream& in) {
  std::vector<LongRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty()) continue;
    auto fields = split_record(line, line_no);
    if (!header_seen) {
      if (fields.size() != std::size(kHeader) ||
          !std::equal(fields.begin(), fields.end(), std::begin(kHeader))) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) +
                        ": expected header 'dataset,metric,system,utterance,score'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != std::size(kHeader)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 5 fields, got " +
                                             std::to_string(fields.size()));
    }
    auto score = parse_double(fields[4]);
    if (!score) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": cannot parse score '" + fields[4] + "'");
    }
    if (fields[1].empty() || fields[2].empty() || fields[3].empty()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty key field");
    }
    rows.push_back(LongRow{std::move(fields[0]), std::move(fields[1]), std::move(fields[2]),
                           std::move(fields[3]), *score});
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "empty input: missing header");
  return rows;
}

IngestResult assemble_tensor(std::span<const LongRow> rows, std::span<const MetricProfile> profiles,
                             const IngestOptions& options) {
  std::unordered_map<std::string, const MetricProfile*> by_id;
  for (const auto& p : profiles) {
    if (!by_id.emplace(p.id, &p).second) {
      throw Error(ErrorCode::ConfigError, "duplicate profile id " + p.id);
    }
  }

  std::vector<const LongRow*> kept;
  std::set<std::string> datasets;
  for (const auto& row : rows) {
    if (options.dataset && row.dataset != *options.dataset) continue;
    datasets.insert(row.dataset);
    kept.push_back(&row);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::EmptyAfterDrop, options.dataset ? "no rows for dataset " + *options.dataset
                                                           : std::string("table has no data rows"));
  }
  if (datasets.size() > 1) {
    throw Error(ErrorCode::MixedDatasets, "table holds " + std::to_string(datasets.size()) +
                                              " datasets; select one with a dataset filter");
  }

  std::set<std::string> metric_ids;
  std::vector<std::string> systems;
  std::vector<std::string> utterances;
  for (const LongRow* row : kept) {
    if (!by_id.contains(row->metric)) {
      throw Error(ErrorCode::UnknownMetric, "metric '" + row->metric + "' has no profile");
    }
    if (!std::isfinite(row->score)) {
      throw Error(ErrorCode::NonFiniteScore,
                  "non-finite score at " + describe_cell(row->metric, row->system, row->utterance));
    }
    metric_ids.insert(row->metric);
    systems.push_back(row->system);
    utterances.push_back(row->utterance);
  }
  systems = sorted_unique(std::move(systems));
  utterances = sorted_unique(std::move(utterances));

  SparseTable table;
  table.dataset_id = *datasets.begin();
  for (const auto& p : profiles) {
    if (metric_ids.contains(p.id)) table.metrics.push_back(p);
  }
  table.systems = systems;
  table.utterances = utterances;
  const std::size_t n = systems.size();
  const std::size_t k = utterances.size();
  table.cells.assign(table.metrics.size() * n * k, std::nullopt);

  std::unordered_map<std::string, std::size_t> metric_pos;
  for (std::size_t m = 0; m < table.metrics.size(); ++m) metric_pos.emplace(table.metrics[m].id, m);
  const auto system_pos = index_of(systems);
  const auto utterance_pos = index_of(utterances);

  for (const LongRow* row : kept) {
    const std::size_t m = metric_pos.at(row->metric);
    const std::size_t cell = (m * n + system_pos.at(row->system)) * k + utterance_pos.at(row->utterance);
    if (table.cells[cell]) {
      throw Error(ErrorCode::DuplicateKey,
                  "duplicate row for " + describe_cell(row->metric, row->system, row->utterance));
    }
    const bool flip = table.metrics[m].orientation == Orientation::LowerBetter;
    table.cells[cell] = flip ? -row->score : row->score;
  }

  if (options.strict) {
    std::size_t missing = 0;
    std::string first;
    // Canonical order so the reported triple does not depend on row order.
    std::vector<std::size_t> order(table.metrics.size());
    for (std::size_t m = 0; m < order.size(); ++m) order[m] = m;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return table.metrics[a].id < table.metrics[b].id; });
    for (std::size_t m : order) {
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t u = 0; u < k; ++u) {
          if (!table.cells[(m * n + s) * k + u]) {
            if (missing++ == 0) first = describe_cell(table.metrics[m].id, systems[s], utterances[u]);
          }
        }
      }
    }
    if (missing > 0) {
      throw Error(ErrorCode::MissingCell, "missing score for " + first +
                                              (missing > 1 ? " and " + std::to_string(missing - 1) + " more" : ""));
    }
  }

  DropResult dropped = drop_incomplete(table);
  if (dropped.tensor.num_systems() < 2) {
    throw Error(ErrorCode::DegenerateSystems, "need at least 2 systems to rank, found " +
                                                  std::to_string(dropped.tensor.num_systems()));
  }
  return IngestResult{std::move(dropped.tensor), std::move(dropped.dropped_utterances)};
}

DropResult drop_incomplete(const SparseTable& table) {
  const std::size_t m_count = table.metrics.size();
  const std::size_t n = table.systems.size();
  const std::size_t k = table.utterances.size();
  if (table.cells.size() != m_count * n * k) {
    throw Error(ErrorCode::InvalidArgument, "sparse table cell count does not match its shape");
  }
  std::vector<std::size_t> complete;
  std::vector<std::string> dropped;
  for (std::size_t u = 0; u < k; ++u) {
    bool full = true;
    for (std::size_t m = 0; m < m_count && full; ++m) {
      for (std::size_t s = 0; s < n && full; ++s) full = table.cells[(m * n + s) * k + u].has_value();
    }
    if (full) {
      complete.push_back(u);
    } else {
      dropped.push_back(table.utterances[u]);
    }
  }
  if (complete.empty()) {
    throw Error(ErrorCode::EmptyAfterDrop, "no utterance is scored by every metric on every system");
  }
  std::vector<std::string> utterances;
  for (std::size_t u : complete) utterances.push_back(table.utterances[u]);
  std::vector<double> scores;
  scores.reserve(m_count * n * complete.size());
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t u : complete) scores.push_back(*table.cells[(m * n + s) * k + u]);
    }
  }
  return DropResult{ScoreTensor(table.dataset_id, table.metrics, table.systems, std::move(utterances),
                                std::move(scores)),
                    std::move(dropped)};
}

IngestResult load_long_table(std::istream& in, std::span<const MetricProfile> profiles,
                             const IngestOptions& options) {
  const auto rows = parse_long_table(in);
  return assemble_tensor(rows, profiles, options);
}

IngestResult load_long_table(const std::filesystem::path& path, std::span<const MetricProfile> profiles,
                             const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return load_long_table(in, profiles, options);
}

void dump_long_table(const ScoreTensor& tensor, std::ostream& out) {
  std::vector<std::size_t> order(tensor.num_metrics());
  for (std::size_t m = 0; m < order.size(); ++m) order[m] = m;
  const auto& metrics = tensor.metrics();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return metrics[a].id < metrics[b].id; });

  std::vector<std::size_t> systems(tensor.num_systems());
  std::vector<std::size_t> utterances(tensor.num_utterances());
  for (std::size_t i = 0; i < systems.size(); ++i) systems[i] = i;
  for (std::size_t i = 0; i < utterances.size(); ++i) utterances[i] = i;
  std::sort(systems.begin(), systems.end(),
            [&](std::size_t a, std::size_t b) { return tensor.systems()[a] < tensor.systems()[b]; });
  std::sort(utterances.begin(), utterances.end(),
            [&](std::size_t a, std::size_t b) { return tensor.utterances()[a] < tensor.utterances()[b]; });

  const std::string dataset = quote_if_needed(tensor.dataset_id());
  out << "dataset,metric,system,utterance,score\n";
  for (std::size_t m : order) {
    const bool flip = metrics[m].orientation == Orientation::LowerBetter;
    const std::string metric = quote_if_needed(metrics[m].id);
    for (std::size_t s : systems) {
      const std::string system = quote_if_needed(tensor.systems()[s]);
      for (std::size_t u : utterances) {
        const double v = tensor.at(m, s, u);
        out << dataset << ',' << metric << ',' << system << ',' << quote_if_needed(tensor.utterances()[u])
            << ',' << format_double(flip ? -v : v) << '\n';
      }
    }
  }
}

std::vector<MetricProfile> parse_profiles(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("profiles: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("metrics") || !doc["metrics"].is_array()) {
    throw Error(ErrorCode::ConfigError, "profiles: expected an object with a 'metrics' array");
  }
  std::vector<MetricProfile> out;
  std::set<std::string> seen;
  for (const auto& entry : doc["metrics"]) {
    auto field = [&](const char* key) -> std::optional<std::string> {
      if (!entry.contains(key) || entry[key].is_null()) return std::nullopt;
      if (!entry[key].is_string()) throw Error(ErrorCode::ConfigError, std::string("profiles: '") + key + "' must be a string");
      return entry[key].get<std::string>();
    };
    MetricProfile p;
    const auto id = field("id");
    if (!id || id->empty()) throw Error(ErrorCode::ConfigError, "profiles: metric without id");
    p.id = *id;
    if (!seen.insert(p.id).second) throw Error(ErrorCode::ConfigError, "profiles: duplicate id " + p.id);

    const auto kind = field("kind");
    if (kind == "human") {
      p.kind = MetricKind::Human;
    } else if (kind == "automatic") {
      p.kind = MetricKind::Automatic;
    } else {
      throw Error(ErrorCode::ConfigError, "profiles: " + p.id + ": kind must be 'human' or 'automatic'");
    }
    const auto orientation = field("orientation");
    if (orientation == "higher_better") {
      p.orientation = Orientation::HigherBetter;
    } else if (orientation == "lower_better") {
      p.orientation = Orientation::LowerBetter;
    } else {
      throw Error(ErrorCode::ConfigError,
                  "profiles: " + p.id + ": orientation must be 'higher_better' or 'lower_better'");
    }
    p.release_date = field("release_date");
    if (p.release_date && !is_iso_date(*p.release_date)) {
      throw Error(ErrorCode::ConfigError, "profiles: " + p.id + ": release_date must be YYYY-MM-DD");
    }
    p.family = field("family");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<MetricProfile> load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open profiles " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_profiles(buffer.str());
}

std::string profiles_to_json(std::span<const MetricProfile> profiles) {
  nlohmann::ordered_json doc;
  doc["metrics"] = nlohmann::ordered_json::array();
  for (const auto& p : profiles) {
    nlohmann::ordered_json entry;
    entry["id"] = p.id;
    entry["kind"] = std::string(to_string(p.kind));
    entry["orientation"] = std::string(to_string(p.orientation));
    if (p.release_date) entry["release_date"] = *p.release_date;
    if (p.family) entry["family"] = *p.family;
    doc["metrics"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

}  // namespace rankmetrics
