#include "blockspec/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "blockspec/error.hpp"

namespace blockspec {

using json = nlohmann::json;

NodeId IdMap::intern(const std::string& name) {
  const auto [it, inserted] = index_.try_emplace(name, static_cast<NodeId>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

std::optional<NodeId> IdMap::find(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

IdMap IdMap::identity(std::size_t n) {
  IdMap m;
  for (std::size_t i = 0; i < n; ++i) m.intern(std::to_string(i));
  return m;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return {buf, res.ptr};
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) fail(ErrorKind::Parse, "not a number: '" + text + "'");
  return v;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  if (delim == 0) {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
  } else {
    std::size_t start = 0;
    for (;;) {
      const auto pos = line.find(delim, start);
      out.push_back(trim(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  return out;
}

[[noreturn]] void line_error(std::size_t line, const std::string& msg) {
  fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

bool parse_uint(const std::string& s, std::uint64_t& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

ParsedGraph parse_edge_list(std::istream& in, const EdgeListOptions& options) {
  struct Raw {
    std::string src, dst;
    double w;
  };
  std::vector<Raw> raw;
  ParsedGraph out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (!options.comment_prefix.empty() && t.rfind(options.comment_prefix, 0) == 0) continue;
    const auto f = split(t, options.delimiter);
    if (f.size() < 2 || f[0].empty() || f[1].empty()) line_error(lineno, "expected 'src dst" + std::string(options.weighted ? " weight'" : "'"));
    double w = 1.0;
    if (options.weighted) {
      if (f.size() < 3) line_error(lineno, "missing weight");
      try {
        w = parse_double(f[2]);
      } catch (const Error&) {
        line_error(lineno, "bad weight '" + f[2] + "'");
      }
      if (!(w > 0.0) || !std::isfinite(w)) line_error(lineno, "weight must be positive and finite");
    }
    raw.push_back({f[0], f[1], w});
  }
  if (raw.empty()) fail(ErrorKind::Parse, "edge list has no edges; no nodes can be inferred");

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  if (options.id_mode == IdMode::String) {
    for (const Raw& r : raw) edges.push_back({out.ids.intern(r.src), out.ids.intern(r.dst), r.w});
  } else {
    std::vector<std::uint64_t> src(raw.size()), dst(raw.size());
    std::vector<std::uint64_t> seen;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!parse_uint(raw[i].src, src[i]) || !parse_uint(raw[i].dst, dst[i])) {
        fail(ErrorKind::Parse, "non-integer node id in edge " + std::to_string(i + 1) + " ('" + raw[i].src + "', '" +
                                   raw[i].dst + "'); use string ids");
      }
      seen.push_back(src[i]);
      seen.push_back(dst[i]);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    const bool contiguous = seen.back() + 1 == seen.size();
    if (!contiguous) out.warnings.push_back("integer ids are not contiguous from 0; remapped in ascending order");
    for (std::uint64_t id : seen) out.ids.intern(std::to_string(id));
    auto index = [&](std::uint64_t id) {
      return static_cast<NodeId>(std::lower_bound(seen.begin(), seen.end(), id) - seen.begin());
    };
    for (std::size_t i = 0; i < raw.size(); ++i) edges.push_back({index(src[i]), index(dst[i]), raw[i].w});
  }
  out.graph = build_graph(edges, out.ids.size());
  return out;
}

ParsedGraph read_edge_list(const std::filesystem::path& path, const EdgeListOptions& options) {
  auto in = open_in(path);
  return parse_edge_list(in, options);
}

ParsedGraph parse_as_rel(std::istream& in) {
  ParsedGraph out;
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto f = split(t, '|');
    if (f.size() < 3 || f[0].empty() || f[1].empty()) line_error(lineno, "expected 'a|b|relationship'");
    const NodeId a = out.ids.intern(f[0]);
    const NodeId b = out.ids.intern(f[1]);
    if (f[2] == "-1") {
      edges.push_back({b, a, 1.0});  // customer b pays provider a
    } else if (f[2] == "0") {
      edges.push_back({a, b, 1.0});
      edges.push_back({b, a, 1.0});
    } else {
      line_error(lineno, "unknown relationship code '" + f[2] + "'");
    }
  }
  if (out.ids.size() == 0) fail(ErrorKind::Parse, "AS relationship file has no links");
  out.graph = build_graph(edges, out.ids.size());
  return out;
}

ParsedGraph read_as_rel(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_as_rel(in);
}

void write_edge_list(std::ostream& out, const DirectedGraph& g, const IdMap& ids) {
  for (const Edge& e : g.edges()) {
    out << ids.name(e.src) << '\t' << ids.name(e.dst) << '\t' << format_double(e.weight) << '\n';
  }
}

void emit_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum) {
  out << "re,im,modulus,residual\n";
  for (const Eigenpair& p : spectrum.pairs) {
    out << format_double(p.value.real()) << ',' << format_double(p.value.imag()) << ','
        << format_double(std::abs(p.value)) << ',' << format_double(p.residual) << '\n';
  }
}

void emit_spectrum_csv(const SpectrumResult& spectrum, const std::filesystem::path& path) {
  std::ostringstream ss;
  emit_spectrum_csv(ss, spectrum);
  write_file(path, ss.str());
}

Labels AssignmentDocument::labels_for(const IdMap& ids) const {
  std::map<std::string, Label> by_name(labels.begin(), labels.end());
  Labels out(ids.size());
  for (NodeId i = 0; i < ids.size(); ++i) {
    const auto it = by_name.find(ids.name(i));
    if (it == by_name.end()) fail(ErrorKind::InvalidArgument, "assignment has no label for node '" + ids.name(i) + "'");
    out[i] = it->second;
  }
  return out;
}

std::string assignment_json(const BlockAssignment& a, const IdMap& ids, std::optional<double> acyclicity) {
  if (a.labels.size() != ids.size()) fail(ErrorKind::InvalidArgument, "id map size differs from label count");
  json doc;
  doc["algorithm"] = a.provenance.algorithm;
  doc["k"] = a.k;
  doc["seed"] = a.provenance.seed;
  doc["ranked"] = a.ranked;
  if (acyclicity) doc["acyclicity"] = *acyclicity;
  json labels = json::object();
  for (NodeId i = 0; i < a.labels.size(); ++i) labels[ids.name(i)] = a.labels[i];
  doc["labels"] = std::move(labels);

  json prov;
  prov["filter"] = a.provenance.filter == EigenFilter::AllK ? "all" : "posimag";
  prov["solver_iterations"] = a.provenance.solver_iterations;
  prov["solver_converged"] = a.provenance.solver_converged;
  prov["boundary_tie"] = a.provenance.boundary_tie;
  prov["filter_fell_back"] = a.provenance.filter_fell_back;
  prov["strongly_connected"] = a.provenance.strongly_connected;
  prov["kmeans_restarts"] = a.provenance.kmeans_restarts;
  prov["kmeans_inertia"] = a.provenance.kmeans_inertia;
  json eig = json::array();
  for (const cplx& z : a.provenance.eigenvalues) eig.push_back({z.real(), z.imag()});
  prov["eigenvalues"] = std::move(eig);
  json del = json::array();
  for (const auto& [s, t] : a.provenance.deleted_block_edges) del.push_back({s, t});
  prov["deleted_block_edges"] = std::move(del);
  prov["warnings"] = a.provenance.warnings;
  doc["provenance"] = std::move(prov);
  return doc.dump(2) + "\n";
}

void emit_assignment_json(const BlockAssignment& a, const IdMap& ids, const std::filesystem::path& path,
                          std::optional<double> acyclicity) {
  write_file(path, assignment_json(a, ids, acyclicity));
}

AssignmentDocument parse_assignment_json(const std::string& text) {
  AssignmentDocument doc;
  try {
    const json j = json::parse(text);
    doc.algorithm = j.at("algorithm").get<std::string>();
    doc.k = j.at("k").get<std::size_t>();
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.ranked = j.value("ranked", false);
    if (j.contains("acyclicity")) doc.acyclicity = j.at("acyclicity").get<double>();
    for (const auto& [name, label] : j.at("labels").items()) doc.labels.emplace_back(name, label.get<Label>());
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("assignment document: ") + e.what());
  }
  for (const auto& [name, label] : doc.labels) {
    if (label >= doc.k) fail(ErrorKind::Parse, "assignment document: label of '" + name + "' is out of range");
  }
  return doc;
}

AssignmentDocument read_assignment_json(const std::filesystem::path& path) {
  return parse_assignment_json(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::Io, "read failed: " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << contents;
  out.flush();
  if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

}  // namespace blockspec
