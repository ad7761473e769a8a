#include "treexp/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace treexp {
namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

std::uint32_t parse_uint(std::string_view word, std::size_t line) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size()) {
    throw ParseError(line, "expected non-negative integer, got '" + std::string(word) + "'");
  }
  return value;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  enum class Stage { Magic, Count, Root, Body };
  Stage stage = Stage::Magic;
  std::uint32_t n = 0;
  VertexId root = 0;
  std::vector<PortEdge> edges;
  std::uint32_t agents = 1;
  std::uint32_t budget = 0;
  bool seen_k = false;
  bool seen_b = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto words = split_words(line);
    if (words.empty() || words[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }

    switch (stage) {
      case Stage::Magic:
        if (words.size() != 2 || words[0] != "TREE" || words[1] != "v1") {
          throw ParseError(line_no, "expected 'TREE v1' header");
        }
        stage = Stage::Count;
        break;
      case Stage::Count:
        if (words.size() != 2 || words[0] != "n") throw ParseError(line_no, "expected 'n <count>'");
        n = parse_uint(words[1], line_no);
        if (n == 0) throw ParseError(line_no, "vertex count must be positive");
        stage = Stage::Root;
        break;
      case Stage::Root:
        if (words.size() != 2 || words[0] != "root") throw ParseError(line_no, "expected 'root <id>'");
        root = parse_uint(words[1], line_no);
        if (root >= n) throw ParseError(line_no, "root id out of range");
        stage = Stage::Body;
        break;
      case Stage::Body:
        if (words[0] == "edge") {
          if (seen_k || seen_b) throw ParseError(line_no, "edge after parameter lines");
          if (words.size() != 5) throw ParseError(line_no, "expected 'edge <u> <v> <port_u> <port_v>'");
          PortEdge e{parse_uint(words[1], line_no), parse_uint(words[2], line_no),
                     parse_uint(words[3], line_no), parse_uint(words[4], line_no)};
          if (e.u >= n || e.v >= n) throw ParseError(line_no, "vertex id out of range");
          edges.push_back(e);
        } else if (words[0] == "k" && words.size() == 2 && !seen_k) {
          agents = parse_uint(words[1], line_no);
          if (agents == 0) throw ParseError(line_no, "agent count must be positive");
          seen_k = true;
        } else if (words[0] == "B" && words.size() == 2 && !seen_b) {
          budget = parse_uint(words[1], line_no);
          seen_b = true;
        } else {
          throw ParseError(line_no, "malformed line '" + std::string(line) + "'");
        }
        break;
    }
    if (end == text.size()) break;
  }
  if (stage != Stage::Body) throw ParseError(line_no, "truncated header");

  Tree tree = Tree::from_edges(n, root, edges);
  return Instance{normalize_ports(tree), agents, budget};
}

std::string serialize_tree(const Tree& tree) {
  std::ostringstream out;
  out << "TREE v1\n"
      << "n " << tree.size() << "\n"
      << "root " << tree.root() << "\n";
  for (const auto& e : tree.edges()) {
    out << "edge " << e.u << ' ' << e.v << ' ' << e.port_u << ' ' << e.port_v << "\n";
  }
  return out.str();
}

std::string serialize_instance(const Instance& instance) {
  std::string text = serialize_tree(instance.tree);
  text += "k " + std::to_string(instance.agents) + "\n";
  text += "B " + std::to_string(instance.budget) + "\n";
  return text;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace treexp
