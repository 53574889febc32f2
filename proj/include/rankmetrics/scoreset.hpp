#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rankmetrics {

enum class MetricKind { Human, Automatic };
enum class Orientation { HigherBetter, LowerBetter };

struct MetricProfile {
  std::string id;
  MetricKind kind = MetricKind::Automatic;
  Orientation orientation = Orientation::HigherBetter;
  // ISO-8601 calendar date (YYYY-MM-DD). Only needed for the timeline analysis.
  std::optional<std::string> release_date;
  // Variants sharing a family tag enter the timeline together.
  std::optional<std::string> family;

  bool is_human() const { return kind == MetricKind::Human; }
};

std::string_view to_string(MetricKind kind);
std::string_view to_string(Orientation orientation);

// Dense (metric, system, utterance) score table. Scores are stored oriented:
// higher is always better. Immutable after construction.
class ScoreTensor {
 public:
  ScoreTensor(std::string dataset_id, std::vector<MetricProfile> metrics,
              std::vector<std::string> systems, std::vector<std::string> utterances,
              std::vector<double> scores);

  const std::string& dataset_id() const { return dataset_id_; }
  const std::vector<MetricProfile>& metrics() const { return metrics_; }
  const std::vector<std::string>& systems() const { return systems_; }
  const std::vector<std::string>& utterances() const { return utterances_; }

  std::size_t num_metrics() const { return metrics_.size(); }
  std::size_t num_systems() const { return systems_.size(); }
  std::size_t num_utterances() const { return utterances_.size(); }

  // Throws UnknownMetric.
  std::size_t metric_index(std::string_view id) const;
  const MetricProfile& profile(std::string_view id) const { return metrics_[metric_index(id)]; }

  double at(std::size_t metric, std::size_t system, std::size_t utterance) const {
    return scores_[(metric * systems_.size() + system) * utterances_.size() + utterance];
  }

  // Scores of every system on one utterance.
  std::vector<double> systems_on_utterance(std::size_t metric, std::size_t utterance) const;
  // Scores of one system over every utterance (contiguous).
  std::span<const double> utterances_of_system(std::size_t metric, std::size_t system) const;

  // Layout is metric-major, then system, then utterance.
  std::span<const double> raw() const { return scores_; }

  // Copy restricted to a subset of metrics, in the given order.
  ScoreTensor select_metrics(std::span<const std::string> ids) const;

  friend bool operator==(const ScoreTensor&, const ScoreTensor&);

 private:
  std::string dataset_id_;
  std::vector<MetricProfile> metrics_;
  std::vector<std::string> systems_;
  std::vector<std::string> utterances_;
  std::vector<double> scores_;
};

bool operator==(const MetricProfile& a, const MetricProfile& b);

struct IngestOptions {
  // Strict rejects any missing cell; lenient drops incomplete utterances.
  bool strict = true;
  // Restrict to one dataset when the file holds several.
  std::optional<std::string> dataset;
};

struct IngestResult {
  ScoreTensor tensor;
  std::vector<std::string> dropped_utterances;
};

// One parsed data row, before densification. `score` is the raw value as
// written in the file (not oriented).
struct LongRow {
  std::string dataset;
  std::string metric;
  std::string system;
  std::string utterance;
  double score = 0.0;
};

// Parses `dataset,metric,system,utterance,score` rows. Throws ParseError with
// the offending line number.
std::vector<LongRow> parse_long_table(std::istream& in);

// Densifies parsed rows. LowerBetter metrics are negated. Systems and
// utterances are sorted; metrics follow the profile order.
IngestResult assemble_tensor(std::span<const LongRow> rows,
                             std::span<const MetricProfile> profiles,
                             const IngestOptions& options = {});

IngestResult load_long_table(const std::filesystem::path& path,
                             std::span<const MetricProfile> profiles,
                             const IngestOptions& options = {});
IngestResult load_long_table(std::istream& in, std::span<const MetricProfile> profiles,
                             const IngestOptions& options = {});

// Cells of a partially populated table, indexed like ScoreTensor; absent cells
// are nullopt.
struct SparseTable {
  std::string dataset_id;
  std::vector<MetricProfile> metrics;
  std::vector<std::string> systems;
  std::vector<std::string> utterances;
  std::vector<std::optional<double>> cells;
};

struct DropResult {
  ScoreTensor tensor;
  std::vector<std::string> dropped_utterances;
};

// Removes every utterance lacking a score for some (metric, system). Throws
// EmptyAfterDrop when nothing survives.
DropResult drop_incomplete(const SparseTable& table);

// Canonical dump: the long-format table, raw orientation, rows sorted by
// (metric, system, utterance), shortest round-trip number formatting.
void dump_long_table(const ScoreTensor& tensor, std::ostream& out);

// Profiles document: {"metrics": [{"id", "kind", "orientation",
// "release_date"?, "family"?}, ...]}.
std::vector<MetricProfile> parse_profiles(std::string_view json_text);
std::vector<MetricProfile> load_profiles(const std::filesystem::path& path);
std::string profiles_to_json(std::span<const MetricProfile> profiles);

}  // namespace rankmetrics
