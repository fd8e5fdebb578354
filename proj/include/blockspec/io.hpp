#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "blockspec/blockalgo.hpp"
#include "blockspec/graph.hpp"
#include "blockspec/spectral.hpp"

namespace blockspec {

enum class IdMode { Integer, String };

struct EdgeListOptions {
  /// 0 splits on any run of spaces/tabs; otherwise a single delimiter char.
  char delimiter = 0;
  bool weighted = false;
  std::string comment_prefix = "#";
  IdMode id_mode = IdMode::Integer;
};

/// Dense node index <-> identifier in the input file.
class IdMap {
 public:
  NodeId intern(const std::string& name);
  std::optional<NodeId> find(const std::string& name) const;
  const std::string& name(NodeId id) const { return names_[id]; }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  static IdMap identity(std::size_t n);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
};

struct ParsedGraph {
  DirectedGraph graph;
  IdMap ids;
  std::vector<std::string> warnings;
};

ParsedGraph parse_edge_list(std::istream& in, const EdgeListOptions& options = {});
ParsedGraph read_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {});

/// CAIDA AS-relationship file: "a|b|-1" (a provides transit to b) becomes the
/// payment edge b -> a; "a|b|0" (peering) becomes both directions.
ParsedGraph parse_as_rel(std::istream& in);
ParsedGraph read_as_rel(const std::filesystem::path& path);

/// Tab-separated "src dst weight" lines using the map's identifiers.
void write_edge_list(std::ostream& out, const DirectedGraph& g, const IdMap& ids);

/// Shortest-exact decimal text: 17 significant digits, '.' separator, no locale.
std::string format_double(double value);
double parse_double(const std::string& text);

/// Columns re,im,modulus,residual.
void emit_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum);
void emit_spectrum_csv(const SpectrumResult& spectrum, const std::filesystem::path& path);

/// Assignment document as read back from JSON.
struct AssignmentDocument {
  std::string algorithm;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool ranked = false;
  std::optional<double> acyclicity;
  std::vector<std::pair<std::string, Label>> labels;  // sorted by identifier

  /// Labels in the node order of `ids`; throws if an identifier is missing.
  Labels labels_for(const IdMap& ids) const;
};

std::string assignment_json(const BlockAssignment& a, const IdMap& ids,
                            std::optional<double> acyclicity = std::nullopt);
void emit_assignment_json(const BlockAssignment& a, const IdMap& ids, const std::filesystem::path& path,
                          std::optional<double> acyclicity = std::nullopt);
AssignmentDocument parse_assignment_json(const std::string& text);
AssignmentDocument read_assignment_json(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace blockspec
