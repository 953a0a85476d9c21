// netifs: exact net-interval analysis for iterated function systems on the
// d-cube with cube-fixing rotations. Subcommands: validate, net-intervals,
// check, graph, localdim. Reports are deterministic JSON (or CSV tables).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "netifs/io.hpp"

using namespace netifs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitCapped = 2;
constexpr int kExitInternal = 3;

struct CommonOpts {
  std::string file;
  std::string output = "json";
};

void emit(const Json& report, const CommonOpts& common, const std::string& csv) {
  if (common.output == "csv")
    std::cout << csv;
  else
    std::cout << report.dump(2) << "\n";
}

std::vector<Rat> level_sequence(const IfsSystem& sys, int count) {
  std::vector<Rat> out;
  if (sys.equicontractive()) {
    Rat r = sys.maps[0].ratio;
    Rat a = rat(1);
    for (int n = 1; n <= count; ++n) {
      a *= r;
      out.push_back(a);
    }
  } else {
    // distinct generation thresholds below 1, finest last
    Rat floor = rat_pow(sys.min_ratio(), count);
    for (const Rat& t : generation_thresholds(sys, floor)) {
      if (t == 1) continue;
      out.push_back(t);
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  return out;
}

EdgePath resolve_vertex_path(const QuotientGraph& g, const std::vector<std::string>& tokens,
                             int start_vertex, int* end_vertex) {
  EdgePath path;
  int vertex = start_vertex;
  for (const std::string& tok : tokens) {
    std::string name = tok;
    int pick = 0;
    if (auto pos = tok.find('#'); pos != std::string::npos) {
      name = tok.substr(0, pos);
      pick = std::stoi(tok.substr(pos + 1));
    }
    int child = std::stoi(name);
    int found = -1, seen = 0;
    for (const GraphEdge& e : g.out[vertex]) {
      if (e.child != child) continue;
      if (seen == pick) {
        found = e.slot;
        break;
      }
      ++seen;
    }
    if (found < 0)
      throw ValidationError("path step \"" + tok + "\": no such edge from vertex " +
                            std::to_string(vertex));
    path.push_back(found);
    vertex = child;
  }
  if (end_vertex) *end_vertex = vertex;
  return path;
}

PathTarget parse_path_target(const QuotientGraph& g, const std::string& text) {
  std::vector<std::string> prefix_toks, cycle_toks;
  bool in_cycle = false;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    (in_cycle ? cycle_toks : prefix_toks).push_back(cur);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',') {
      flush();
    } else if (ch == '@') {
      flush();
      in_cycle = true;
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  flush();
  PathTarget target;
  int vertex = 0;
  target.prefix = resolve_vertex_path(g, prefix_toks, 0, &vertex);
  target.cycle = resolve_vertex_path(g, cycle_toks, vertex, nullptr);
  return target;
}

int run_validate(const CommonOpts& common) {
  IfsDocument doc = load_ifs_document(common.file);
  ValidationReport rep = validate(doc.sys);
  Json results = validation_json(rep);
  std::vector<std::string> warnings;
  if (doc.measure) {
    results["probabilities_ok"] = true;
    FncReport fnc = explore_fnc(doc.sys);
    TechnicalAssumptions ta = check_technical_assumptions(*doc.measure, fnc);
    results["technical_assumptions"] = Json{{"fnc_detected", ta.fnc_detected},
                                            {"attractor_is_cube", ta.attractor_is_cube},
                                            {"boundary_pmin", ta.boundary_pmin},
                                            {"equicontractive", ta.equicontractive},
                                            {"all", ta.all()}};
    if (!ta.all()) warnings.push_back("technical assumptions: " + ta.failing_clause());
  }
  for (const std::string& p : rep.problems) warnings.push_back(p);
  Json report = make_report("validate", doc, Json::object(), results, warnings);
  std::ostringstream csv;
  csv << "key,value\n"
      << "invariant," << rep.invariant << "\n"
      << "full_support," << rep.full_support << "\n"
      << "equicontractive," << rep.equicontractive << "\n";
  emit(report, common, csv.str());
  return rep.ok() ? kExitOk : kExitInput;
}

int run_net_intervals(const CommonOpts& common, const std::string& alpha_str, int level,
                      int k_depth) {
  IfsDocument doc = load_ifs_document(common.file);
  Rat alpha;
  if (!alpha_str.empty()) {
    alpha = parse_rat(alpha_str);
  } else {
    if (!doc.sys.equicontractive())
      throw ValidationError("--level needs an equicontractive system; use --alpha");
    alpha = rat_pow(doc.sys.maps[0].ratio, level);
  }
  EnumerateOptions opts;
  opts.k_cover_depth = k_depth;
  NetEnumeration nets = net_intervals_at(doc.sys, alpha, opts);
  // type ids relative to this enumeration (by first appearance)
  std::vector<NetTypeKey> keys;
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "index,type,level,size,anchor,cells,cover_words\n";
  for (size_t i = 0; i < nets.intervals.size(); ++i) {
    const NetInterval& n = nets.intervals[i];
    NetTypeKey key = type_of(n);
    int type_id = -1;
    for (size_t k = 0; k < keys.size(); ++k)
      if (keys[k] == key) type_id = static_cast<int>(k);
    if (type_id < 0) {
      type_id = static_cast<int>(keys.size());
      keys.push_back(std::move(key));
    }
    rows.push_back(net_interval_json(n, type_id));
    csv << i << "," << type_id << "," << rat_str(n.level) << "," << rat_str(n.size) << ","
        << vec_str(n.anchor) << "," << n.region.cells.size() << "," << n.cover.size() << "\n";
  }
  Json results;
  results["count"] = static_cast<int>(nets.intervals.size());
  results["distinct_types"] = static_cast<int>(keys.size());
  results["intervals"] = rows;
  std::vector<std::string> warnings;
  if (nets.k_filter_approximate)
    warnings.push_back("no full support: attractor filter approximated by a depth-" +
                       std::to_string(k_depth) + " cover; results undetermined beyond it");
  Json report = make_report("net-intervals", doc,
                            Json{{"alpha", rat_str(alpha)}}, results, warnings);
  emit(report, common, csv.str());
  return kExitOk;
}

int run_check(const CommonOpts& common, bool do_fnc, bool do_wsc, bool do_gftc, bool do_fset,
              bool do_overlap, int max_levels, int max_types, int level_count,
              const std::string& truncation, int fset_n) {
  IfsDocument doc = load_ifs_document(common.file);
  Json results;
  std::vector<std::string> warnings;
  bool capped = false;
  std::optional<FncReport> fnc;
  if (!do_fnc && !do_wsc && !do_gftc && !do_fset && !do_overlap)
    do_fnc = do_wsc = do_gftc = do_overlap = true;
  if (do_fnc || do_gftc) {
    ExploreCaps caps;
    caps.max_levels = max_levels;
    caps.max_types = max_types;
    fnc = explore_fnc(doc.sys, caps);
    if (fnc->approximate)
      warnings.push_back("no full support: neighbor exploration is approximate");
  }
  if (do_fnc) {
    results["fnc"] = fnc_json(*fnc);
    if (fnc->status == FncStatus::cap_reached) {
      capped = true;
      warnings.push_back("fnc: caps reached; partial data (not a negative certificate)");
    }
  }
  std::vector<Rat> levels = level_sequence(doc.sys, level_count);
  if (do_wsc) {
    WscBound wsc = wsc_bound(doc.sys, levels);
    Json wj = wsc_json(wsc);
    if (fnc && fnc->status == FncStatus::fnc_detected) {
      wj["sup_over_types"] = fnc->max_neighbor_count();
      wj["certified"] = true;
    } else {
      wj["certified"] = false;
    }
    results["wsc"] = wj;
  }
  if (do_gftc) {
    Rat trunc = truncation.empty() ? rat_pow(doc.sys.min_ratio(), 4) : parse_rat(truncation);
    GftcSet set = gftc_set(doc.sys, trunc, fnc ? &*fnc : nullptr);
    results["gftc"] = gftc_json(set);
  }
  if (do_fset) {
    FsetResult fs = fset_characterization(doc.sys, fset_n);
    results["fset"] = fset_json(fs);
    if (!fs.stabilized) warnings.push_back("fset: not stabilized within n_max");
  }
  if (do_overlap) {
    OverlapFloor of = overlap_floor(doc.sys, levels);
    results["overlap_floor"] = overlap_json(of);
  }
  Json params;
  params["levels"] = Json::array();
  for (const Rat& l : levels) params["levels"].push_back(rat_str(l));
  Json report = make_report("check", doc, params, results, warnings);
  std::ostringstream csv;
  csv << "check,key,value\n";
  if (do_fnc)
    csv << "fnc,status," << results["fnc"]["status"].get<std::string>() << "\n"
        << "fnc,types," << results["fnc"]["type_count"].get<int>() << "\n";
  if (do_wsc) csv << "wsc,max_neighbors," << results["wsc"]["max_neighbors"].get<int>() << "\n";
  emit(report, common, csv.str());
  return capped ? kExitCapped : kExitOk;
}

int run_graph(const CommonOpts& common, bool no_weights, bool essential_only,
              const std::string& dot_path, int max_levels, int max_types) {
  IfsDocument doc = load_ifs_document(common.file);
  GraphOptions opts;
  opts.caps.max_levels = max_levels;
  opts.caps.max_types = max_types;
  opts.weighted = !no_weights;
  QuotientGraph g;
  if (opts.weighted) {
    if (!doc.measure)
      throw ValidationError("weighted graph needs probabilities (or pass --no-weights)");
    g = build_graph(*doc.measure, opts);
  } else {
    g = build_graph_unweighted(doc.sys, opts.caps);
  }
  ClassDecomposition cd = class_decomposition(g, /*enforce_unique=*/opts.weighted);
  Json results = graph_json(g, cd);
  if (essential_only && cd.essential_classes.size() == 1)
    results = Json{{"essential_vertices", cd.sccs[cd.essential_classes[0]]},
                   {"vertex_count", g.vertex_count()}};
  std::string dot = dot_export(g, cd);
  if (!dot_path.empty()) {
    std::ofstream out(dot_path);
    out << dot;
  }
  Json report = make_report("graph", doc, Json{{"weighted", opts.weighted}}, results, {});
  std::ostringstream csv;
  csv << "parent,child,slot\n";
  for (const auto& out : g.out)
    for (const GraphEdge& e : out) csv << e.parent << "," << e.child << "," << e.slot << "\n";
  emit(report, common, csv.str());
  return kExitOk;
}

int run_localdim(const CommonOpts& common, const std::string& point_str,
                 const std::string& path_str, int depth) {
  IfsDocument doc = load_ifs_document(common.file);
  if (!doc.measure) throw ValidationError("localdim needs probabilities in the document");
  QuotientGraph g = build_graph(*doc.measure);
  DimReport rep;
  Json params;
  params["depth"] = depth;
  if (!point_str.empty()) {
    std::vector<std::string> coords;
    std::string cur;
    for (char ch : point_str) {
      if (ch == ',') {
        coords.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) coords.push_back(cur);
    Vec point = parse_vec(coords);
    params["point"] = point_str;
    rep = local_dimension(*doc.measure, g, point, depth);
  } else if (!path_str.empty()) {
    PathTarget target = parse_path_target(g, path_str);
    params["path"] = path_str;
    rep = local_dimension(*doc.measure, g, target, depth);
  } else {
    throw ValidationError("localdim needs --point or --path");
  }
  Json report = make_report("localdim", doc, params, dim_json(rep), rep.warnings);
  std::ostringstream csv;
  csv << "n,pn,estimate\n";
  for (const DimEstimate& e : rep.estimates)
    csv << e.n << "," << rat_str(e.pn) << "," << e.value << "\n";
  emit(report, common, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact net-interval analysis for IFS on the d-cube"};
  app.require_subcommand(1);

  CommonOpts common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", common.file, "IFS document (JSON)")->required();
    sub->add_option("--output", common.output, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* v = app.add_subcommand("validate", "structural checks on an IFS document");
  add_common(v);

  auto* ni = app.add_subcommand("net-intervals", "enumerate net intervals at a level");
  add_common(ni);
  std::string alpha_str;
  int level = 1, k_depth = 3;
  ni->add_option("--alpha", alpha_str, "generation scale as p/q");
  ni->add_option("--level", level, "equicontractive level n (alpha = r^n)");
  ni->add_option("--k-depth", k_depth, "attractor-cover depth when support is not full");

  auto* ck = app.add_subcommand("check", "separation-condition analyses");
  add_common(ck);
  bool do_fnc = false, do_wsc = false, do_gftc = false, do_fset = false, do_overlap = false;
  int max_levels = 24, max_types = 512, level_count = 4, fset_n = 5;
  std::string truncation;
  ck->add_flag("--fnc", do_fnc, "finite neighbor condition exploration");
  ck->add_flag("--wsc", do_wsc, "neighbor-count bound per level");
  ck->add_flag("--gftc", do_gftc, "overlap-map set enumeration");
  ck->add_flag("--fset", do_fset, "sup-norm difference-set characterization");
  ck->add_flag("--overlap-floor", do_overlap, "normalized minimal overlap per level");
  ck->add_option("--max-levels", max_levels, "exploration sweep cap");
  ck->add_option("--max-types", max_types, "exploration type cap");
  ck->add_option("--levels", level_count, "how many levels the per-level analyses scan");
  ck->add_option("--truncation", truncation, "threshold floor for the overlap-map set");
  ck->add_option("--fset-n", fset_n, "max word length for the difference set");

  auto* gr = app.add_subcommand("graph", "build the quotient graph");
  add_common(gr);
  bool no_weights = false, essential_only = false;
  std::string dot_path;
  gr->add_flag("--no-weights", no_weights, "skip transition matrices");
  gr->add_flag("--essential", essential_only, "report only the essential class");
  gr->add_option("--dot", dot_path, "write a DOT rendition here");
  gr->add_option("--max-levels", max_levels, "exploration sweep cap");
  gr->add_option("--max-types", max_types, "exploration type cap");

  auto* ld = app.add_subcommand("localdim", "local dimension at a point or along a path");
  add_common(ld);
  std::string point_str, path_str;
  int depth = 16;
  ld->add_option("--point", point_str, "exact coordinates, e.g. \"-1/2,1/2\"");
  ld->add_option("--path", path_str,
                 "vertex path from the root, '@' starts the cycle, '#k' picks a parallel edge");
  ld->add_option("--depth", depth, "number of refinement steps to estimate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(v)) return run_validate(common);
    if (app.got_subcommand(ni)) return run_net_intervals(common, alpha_str, level, k_depth);
    if (app.got_subcommand(ck))
      return run_check(common, do_fnc, do_wsc, do_gftc, do_fset, do_overlap, max_levels,
                       max_types, level_count, truncation, fset_n);
    if (app.got_subcommand(gr))
      return run_graph(common, no_weights, essential_only, dot_path, max_levels, max_types);
    if (app.got_subcommand(ld)) return run_localdim(common, point_str, path_str, depth);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
