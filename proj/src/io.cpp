#include "netifs/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace netifs {

std::string fnv1a_digest(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

Rat field_rat(const Json& j, const std::string& field) {
  if (!j.is_string())
    throw ParseError("field \"" + field + "\": rationals must be exact strings like \"1/2\"");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const ParseError&) {
    throw ParseError("field \"" + field + "\": not an exact rational: " + j.dump());
  }
}

Vec field_vec(const Json& j, const std::string& field, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ParseError("field \"" + field + "\": expected an array of " + std::to_string(dim) +
                     " rational strings");
  Vec out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(field_rat(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

IfsDocument parse_ifs_document(const Json& doc) {
  if (!doc.is_object()) throw ParseError("document must be a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer())
    throw ParseError("field \"dim\": required integer");
  int dim = doc["dim"].get<int>();
  if (!doc.contains("maps") || !doc["maps"].is_array() || doc["maps"].empty())
    throw ParseError("field \"maps\": required nonempty array");
  std::vector<Similarity> maps;
  for (size_t i = 0; i < doc["maps"].size(); ++i) {
    const Json& m = doc["maps"][i];
    std::string where = "maps[" + std::to_string(i) + "]";
    if (!m.is_object()) throw ParseError("field \"" + where + "\": expected an object");
    Similarity s;
    if (!m.contains("ratio")) throw ParseError("field \"" + where + ".ratio\": required");
    s.ratio = field_rat(m["ratio"], where + ".ratio");
    if (m.contains("rotation")) {
      const Json& rot = m["rotation"];
      if (!rot.is_object() || !rot.contains("perm") || !rot.contains("signs"))
        throw ParseError("field \"" + where + ".rotation\": expected {perm, signs}");
      SignedPerm p;
      for (const Json& v : rot["perm"]) p.perm.push_back(v.get<int>());
      for (const Json& v : rot["signs"]) p.signs.push_back(v.get<int>());
      validate_signed_perm(p, dim);
      s.rot = p;
    } else {
      s.rot = SignedPerm::identity(dim);
    }
    if (!m.contains("translation"))
      throw ParseError("field \"" + where + ".translation\": required");
    s.trans = field_vec(m["translation"], where + ".translation", dim);
    maps.push_back(std::move(s));
  }
  IfsDocument out;
  out.sys = make_ifs(dim, std::move(maps));
  if (doc.contains("probabilities")) {
    const Json& pj = doc["probabilities"];
    if (!pj.is_array()) throw ParseError("field \"probabilities\": expected array");
    std::vector<Rat> probs;
    for (size_t i = 0; i < pj.size(); ++i)
      probs.push_back(field_rat(pj[i], "probabilities[" + std::to_string(i) + "]"));
    out.measure = make_measure(out.sys, std::move(probs));
  }
  out.digest = fnv1a_digest(doc.dump());
  return out;
}

IfsDocument load_ifs_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_ifs_document(doc);
}

Json similarity_json(const Similarity& s) {
  Json j;
  j["ratio"] = rat_str(s.ratio);
  if (!s.rot.is_identity()) {
    j["rotation"] = Json{{"perm", s.rot.perm}, {"signs", s.rot.signs}};
  }
  Json t = Json::array();
  for (const Rat& c : s.trans) t.push_back(rat_str(c));
  j["translation"] = t;
  return j;
}

Json region_json(const Region& r) {
  Json cells = Json::array();
  for (const Box& c : r.cells) {
    Json lo = Json::array(), hi = Json::array();
    for (const Rat& v : c.lo) lo.push_back(rat_str(v));
    for (const Rat& v : c.hi) hi.push_back(rat_str(v));
    cells.push_back(Json{{"lo", lo}, {"hi", hi}});
  }
  return Json{{"cells", cells}, {"volume", rat_str(r.volume())}};
}

Json matrix_json(const TransitionMatrix& m) {
  Json rows = Json::array();
  for (const auto& row : m.entries) {
    Json r = Json::array();
    for (const Rat& e : row) r.push_back(rat_str(e));
    rows.push_back(r);
  }
  return rows;
}

Json net_interval_json(const NetInterval& n, int type_id) {
  Json j;
  j["level"] = rat_str(n.level);
  j["region"] = region_json(n.region);
  Json cover = Json::array();
  for (const Word& w : n.cover) {
    Json letters = Json::array();
    for (int l : w.letters) letters.push_back(l + 1);  // 1-based labels
    cover.push_back(letters);
  }
  j["cover"] = cover;
  j["size"] = rat_str(n.size);
  j["anchor"] = Json::array();
  for (const Rat& c : n.anchor) j["anchor"].push_back(rat_str(c));
  Json nb = Json::array();
  for (const Similarity& t : neighbor_set(n)) nb.push_back(similarity_json(t));
  j["neighbor_set"] = nb;
  if (type_id >= 0) j["type"] = type_id;
  return j;
}

Json validation_json(const ValidationReport& rep) {
  Json j;
  j["invariant"] = rep.invariant;
  j["full_support"] = rep.full_support;
  j["equicontractive"] = rep.equicontractive;
  j["boundary_maps"] = rep.boundary_maps;
  j["duplicate_maps"] = rep.duplicate_maps;
  j["hull_is_cube"] = rep.hull_is_cube == Tristate::yes      ? "yes"
                      : rep.hull_is_cube == Tristate::no     ? "no"
                                                             : "unknown";
  j["problems"] = rep.problems;
  return j;
}

Json fnc_json(const FncReport& rep) {
  Json j;
  j["status"] = rep.status == FncStatus::fnc_detected ? "FNC_detected" : "cap_reached";
  j["type_count"] = static_cast<int>(rep.types.size());
  if (rep.status == FncStatus::fnc_detected) j["closure_level"] = rat_str(rep.closure_level);
  Json types = Json::array();
  for (size_t i = 0; i < rep.types.size(); ++i) {
    const TypeRecord& t = rep.types[i];
    Json tj;
    tj["id"] = static_cast<int>(i);
    tj["neighbor_count"] = static_cast<int>(t.key.neighbors.size());
    Json nb = Json::array();
    for (const Similarity& s : t.key.neighbors) nb.push_back(similarity_json(s));
    tj["neighbors"] = nb;
    tj["normalized_region"] = region_json(t.key.normalized);
    tj["representative"] = region_json(t.representative);
    tj["representative_level"] = rat_str(t.representative_level);
    tj["generation"] = t.bfs_generation;
    types.push_back(std::move(tj));
  }
  j["types"] = types;
  Json edges = Json::array();
  for (const TypeEdge& e : rep.edges) {
    Json ej{{"parent", e.parent}, {"child", e.child}, {"slot", e.slot}};
    // containment certificate: the child's region inside the parent's
    // normalized frame
    if (e.parent < static_cast<int>(rep.expansions.size()) &&
        e.slot < static_cast<int>(rep.expansions[e.parent].children.size()))
      ej["child_region"] = region_json(rep.expansions[e.parent].children[e.slot].region);
    edges.push_back(std::move(ej));
  }
  j["edges"] = edges;
  if (rep.approximate) j["approximate"] = true;
  return j;
}

Json wsc_json(const WscBound& rep) {
  Json j;
  j["max_neighbors"] = rep.max_neighbors;
  Json rows = Json::array();
  for (const WscLevel& l : rep.per_level)
    rows.push_back(Json{{"level", rat_str(l.level)},
                        {"max_neighbors", l.max_neighbors},
                        {"net_intervals", l.interval_count}});
  j["per_level"] = rows;
  return j;
}

Json gftc_json(const GftcSet& rep) {
  Json j;
  j["size"] = static_cast<int>(rep.elements.size());
  j["truncation_alpha"] = rat_str(rep.truncation_alpha);
  j["contains_identity"] = rep.contains_identity;
  j["inverse_closed"] = rep.inverse_closed;
  Json growth = Json::array();
  for (const auto& [level, size] : rep.growth)
    growth.push_back(Json{{"level", rat_str(level)}, {"size", size}});
  j["growth"] = growth;
  Json elems = Json::array();
  for (const Similarity& e : rep.elements) elems.push_back(similarity_json(e));
  j["elements"] = elems;
  if (rep.contained_in_witness) {
    j["witness_size"] = *rep.witness_size;
    j["contained_in_witness"] = *rep.contained_in_witness;
  }
  return j;
}

Json fset_json(const FsetResult& rep) {
  Json j;
  j["size"] = static_cast<int>(rep.vectors.size());
  j["stabilized"] = rep.stabilized;
  Json sizes = Json::array();
  for (const auto& [n, size] : rep.sizes_per_n)
    sizes.push_back(Json{{"n", n}, {"size", size}});
  j["sizes_per_n"] = sizes;
  Json vecs = Json::array();
  for (const Vec& v : rep.vectors) {
    Json coords = Json::array();
    for (const Rat& c : v) coords.push_back(rat_str(c));
    vecs.push_back(coords);
  }
  j["vectors"] = vecs;
  return j;
}

Json overlap_json(const OverlapFloor& rep) {
  Json j;
  j["eps_hat"] = rep.eps_hat ? Json(rat_str(*rep.eps_hat)) : Json(nullptr);
  Json rows = Json::array();
  for (const OverlapLevel& l : rep.per_level) {
    Json row;
    row["level"] = rat_str(l.level);
    row["overlapping_pairs"] = l.overlapping_pairs;
    row["min_normalized"] = l.min_normalized ? Json(rat_str(*l.min_normalized)) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  j["per_level"] = rows;
  j["diagnostics"] = Json{
      {"delta", rat_str(rep.delta_diagnostic)},
      {"eps1", rep.eps1_diagnostic ? Json(rat_str(*rep.eps1_diagnostic)) : Json(nullptr)}};
  return j;
}

Json graph_json(const QuotientGraph& g, const ClassDecomposition& cd) {
  Json j;
  j["weighted"] = g.weighted;
  j["vertices"] = fnc_json(g.fnc)["types"];
  Json edges = Json::array();
  for (const auto& out : g.out)
    for (const GraphEdge& e : out) {
      Json ej;
      ej["parent"] = e.parent;
      ej["child"] = e.child;
      ej["slot"] = e.slot;
      if (e.weight) ej["matrix"] = matrix_json(*e.weight);
      edges.push_back(std::move(ej));
    }
  j["edges"] = edges;
  Json sccs = Json::array();
  for (const auto& scc : cd.sccs) sccs.push_back(scc);
  j["sccs"] = sccs;
  j["loop_classes"] = cd.loop_classes;
  j["essential_classes"] = cd.essential_classes;
  if (cd.essential_classes.size() == 1)
    j["essential_vertices"] = cd.sccs[cd.essential_classes[0]];
  return j;
}

Json dim_json(const DimReport& rep) {
  Json j;
  Json est = Json::array();
  for (const DimEstimate& e : rep.estimates)
    est.push_back(Json{{"n", e.n}, {"pn", rat_str(e.pn)}, {"estimate", e.value}});
  j["estimates"] = est;
  if (rep.certificate) {
    const DimCertificate& c = *rep.certificate;
    Json cj;
    cj["prefix_length"] = c.prefix_length;
    cj["period"] = c.period;
    cj["cycle_matrix"] = matrix_json(c.cycle_product);
    cj["spectral_radius"] = Json{{"lo", rat_str(c.radius_lo)}, {"hi", rat_str(c.radius_hi)}};
    cj["dim"] = Json{{"lo", c.dim_lo}, {"hi", c.dim_hi}};
    if (c.exact_dim) cj["dim_exact"] = rat_str(*c.exact_dim);
    j["certificate"] = std::move(cj);
  }
  Json path = Json::array();
  for (int slot : rep.followed_path) path.push_back(slot);
  j["path"] = path;
  j["warnings"] = rep.warnings;
  return j;
}

Json make_report(const std::string& command, const IfsDocument& doc, Json parameters,
                 Json results, std::vector<std::string> warnings) {
  Json rep;
  rep["command"] = command;
  rep["input_digest"] = doc.digest;
  rep["parameters"] = std::move(parameters);
  rep["results"] = std::move(results);
  rep["warnings"] = warnings;
  return rep;
}

std::string dot_export(const QuotientGraph& g, const ClassDecomposition& cd) {
  std::ostringstream os;
  os << "digraph quotient {\n";
  os << "  rankdir=TB;\n";
  std::vector<char> essential(g.vertex_count(), 0);
  if (!cd.essential_classes.empty())
    for (int c : cd.essential_classes)
      for (int v : cd.sccs[c]) essential[v] = 1;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (essential[v]) continue;
    os << "  t" << v << " [label=\"" << v << "\"];\n";
  }
  os << "  subgraph cluster_essential {\n";
  os << "    label=\"essential class\";\n";
  os << "    style=dotted;\n";
  for (int v = 0; v < g.vertex_count(); ++v)
    if (essential[v]) os << "    t" << v << " [label=\"" << v << "\"];\n";
  os << "  }\n";
  for (const auto& out : g.out)
    for (const GraphEdge& e : out) {
      os << "  t" << e.parent << " -> t" << e.child;
      if (e.weight) {
        os << " [label=\"";
        const TransitionMatrix& m = *e.weight;
        os << "[";
        for (int i = 0; i < m.rows; ++i) {
          if (i) os << ";";
          for (int k = 0; k < m.cols; ++k) {
            if (k) os << ",";
            os << rat_str(m.entries[i][k]);
          }
        }
        os << "]\"]";
      }
      os << ";\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace netifs
