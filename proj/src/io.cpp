#include "cliquefactor/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cliquefactor::io {

namespace {

std::uint32_t parse_uint(std::string_view text, std::size_t line, const char* what) {
  std::uint32_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Content lines (non-blank, not comments) with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string_view>>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto toks = tokens(text.substr(pos, end - pos));
    if (!toks.empty() && toks.front().front() != '#') out.emplace_back(line_no, std::move(toks));
    pos = end + 1;
  }
  return out;
}

bool looks_like_json(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) throw ParseError(0, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(0, std::string("field '") + name + "' has the wrong type");
  }
}

PartiteHypergraph build(const RawInstance& raw, const std::vector<std::size_t>& edge_lines) {
  const auto report = validate(raw);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    std::size_t line = 0;
    std::string where;
    if (v.kind != Violation::Kind::BadParameters) {
      if (!edge_lines.empty()) {
        line = edge_lines[v.edge];
      } else {
        where = "edge " + std::to_string(v.edge) + ": ";
      }
    } else if (!edge_lines.empty()) {
      line = 1;
    }
    throw ParseError(line, where + v.message);
  }
  return PartiteHypergraph::from_raw(raw);
}

}  // namespace

std::string format_vertex(VertexId id) { return "c" + std::to_string(id.cls) + ".v" + std::to_string(id.idx); }

VertexId parse_vertex(std::string_view text) {
  const auto dot = text.find(".v");
  if (text.size() < 4 || text.front() != 'c' || dot == std::string_view::npos) {
    throw std::invalid_argument("bad vertex id '" + std::string(text) + "'");
  }
  try {
    return {parse_uint(text.substr(1, dot - 1), 0, "class index"), parse_uint(text.substr(dot + 2), 0, "vertex index")};
  } catch (const ParseError&) {
    throw std::invalid_argument("bad vertex id '" + std::string(text) + "'");
  }
}

PartiteHypergraph parse_instance(std::string_view text) {
  RawInstance raw;
  if (looks_like_json(text)) {
    const auto j = parse_json(text);
    raw.t = field<std::uint32_t>(j, "t");
    raw.k = field<std::uint32_t>(j, "k");
    raw.class_sizes = field<std::vector<std::uint32_t>>(j, "classSizes");
    const auto edges = field<std::vector<std::vector<std::string>>>(j, "edges");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      std::vector<VertexId> edge;
      for (const auto& s : edges[e]) {
        try {
          edge.push_back(parse_vertex(s));
        } catch (const std::invalid_argument& err) {
          throw ParseError(0, "edge " + std::to_string(e) + ": " + err.what());
        }
      }
      raw.edges.push_back(std::move(edge));
    }
    return build(raw, {});
  }

  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(0, "empty instance");
  const auto& [header_line, header] = lines.front();
  if (header.size() < 2) throw ParseError(header_line, "header must be 't k n1 ... nt'");
  raw.t = parse_uint(header[0], header_line, "t");
  raw.k = parse_uint(header[1], header_line, "k");
  for (std::size_t i = 2; i < header.size(); ++i) raw.class_sizes.push_back(parse_uint(header[i], header_line, "class size"));
  if (raw.class_sizes.size() != raw.t) {
    throw ParseError(header_line, "header lists " + std::to_string(raw.class_sizes.size()) + " class sizes for t=" +
                                      std::to_string(raw.t));
  }
  std::vector<std::size_t> edge_lines;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line_no, toks] = lines[i];
    std::vector<VertexId> edge;
    for (auto tok : toks) {
      try {
        edge.push_back(parse_vertex(tok));
      } catch (const std::invalid_argument& err) {
        throw ParseError(line_no, err.what());
      }
    }
    raw.edges.push_back(std::move(edge));
    edge_lines.push_back(line_no);
  }
  return build(raw, edge_lines.empty() ? std::vector<std::size_t>{header_line} : edge_lines);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PartiteHypergraph load_instance(const std::filesystem::path& path) { return parse_instance(read_file(path)); }

nlohmann::json instance_to_json(const PartiteHypergraph& h) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    nlohmann::json edge = nlohmann::json::array();
    for (Vertex v : h.edge(e)) edge.push_back(format_vertex(h.id(v)));
    edges.push_back(std::move(edge));
  }
  return {{"t", h.t()}, {"k", h.k()}, {"classSizes", h.class_sizes()}, {"edges", std::move(edges)}};
}

std::string instance_to_edge_list(const PartiteHypergraph& h) {
  std::string out = std::to_string(h.t()) + " " + std::to_string(h.k());
  for (auto s : h.class_sizes()) out += " " + std::to_string(s);
  out += "\n";
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    bool first = true;
    for (Vertex v : h.edge(e)) {
      if (!first) out += " ";
      out += format_vertex(h.id(v));
      first = false;
    }
    out += "\n";
  }
  return out;
}

GeneralHypergraph parse_general(std::string_view text) {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::vector<std::vector<Vertex>> edges;
  if (looks_like_json(text)) {
    const auto j = parse_json(text);
    n = field<std::uint32_t>(j, "n");
    k = field<std::uint32_t>(j, "k");
    edges = field<std::vector<std::vector<Vertex>>>(j, "edges");
    try {
      return GeneralHypergraph(n, k, std::move(edges));
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, e.what());
    }
  }
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(0, "empty instance");
  const auto& [header_line, header] = lines.front();
  if (header.size() != 2) throw ParseError(header_line, "header must be 'n k'");
  n = parse_uint(header[0], header_line, "n");
  k = parse_uint(header[1], header_line, "k");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line_no, toks] = lines[i];
    std::vector<Vertex> edge;
    for (auto tok : toks) edge.push_back(parse_uint(tok, line_no, "vertex"));
    // Check each edge on its own so the error can cite its line.
    try {
      GeneralHypergraph(n, k, {edge});
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    edges.push_back(std::move(edge));
  }
  try {
    return GeneralHypergraph(n, k, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

GeneralHypergraph load_general(const std::filesystem::path& path) { return parse_general(read_file(path)); }

nlohmann::json general_to_json(const GeneralHypergraph& h) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    auto span = h.edge(e);
    edges.push_back(std::vector<Vertex>(span.begin(), span.end()));
  }
  return {{"n", h.n()}, {"k", h.k()}, {"edges", std::move(edges)}};
}

}  // namespace cliquefactor::io
