#include "fiblang/dot.hpp"

#include <sstream>

namespace fiblang {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}

void edges(std::ostringstream& out, const FinCategory& c, const std::vector<bool>& dashed) {
  for (Index m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m)) continue;
    out << "  " << quoted(c.object_id(c.src(m))) << " -> " << quoted(c.object_id(c.tgt(m)))
        << " [label=" << quoted(c.morphism_id(m)) << (dashed[m] ? ", style=dashed" : "") << "];\n";
  }
}

}  // namespace

std::string category_dot(const FinCategory& c, const std::string& graph_name,
                         const std::set<std::string>& dashed) {
  std::ostringstream out;
  out << "digraph " << quoted(graph_name) << " {\n";
  for (Index x = 0; x < c.object_count(); ++x) out << "  " << quoted(c.object_id(x)) << ";\n";
  std::vector<bool> flags(c.morphism_count());
  for (Index m = 0; m < c.morphism_count(); ++m) flags[m] = dashed.contains(c.morphism_id(m));
  edges(out, c, flags);
  out << "}\n";
  return out.str();
}

std::string language_dot(const Speaker& s) {
  return category_dot(s.language(), s.name() + " language", s.learned_morphisms());
}

std::string total_dot(const Speaker& s) {
  const auto& p = s.fibration().projection();
  const auto& total = *p.dom;
  const auto& lang = s.language();
  std::ostringstream out;
  out << "digraph " << quoted(s.name() + " elements") << " {\n";
  for (Index l = 0; l < lang.object_count(); ++l) {
    out << "  subgraph " << quoted("cluster_" + lang.object_id(l)) << " {\n"
        << "    label=" << quoted(lang.object_id(l)) << ";\n";
    for (Index e = 0; e < total.object_count(); ++e) {
      if (p.object_map[e] == l) out << "    " << quoted(total.object_id(e)) << ";\n";
    }
    out << "  }\n";
  }
  std::vector<bool> flags(total.morphism_count());
  for (Index h = 0; h < total.morphism_count(); ++h) {
    flags[h] = s.learned_morphisms().contains(lang.morphism_id(p.morphism_map[h]));
  }
  edges(out, total, flags);
  out << "}\n";
  return out.str();
}

}  // namespace fiblang
