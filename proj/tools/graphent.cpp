// graphent: path counts, entropy estimates and identity checks from the
// command line. Exit codes: 0 ok, 1 a verification failed, 2 bad input.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphent/graphent.hpp"

namespace {

using graphent::VertexId;
using json = nlohmann::ordered_json;

struct Options {
  std::string command;
  std::string family;
  long p = 2;
  std::string r_seq;
  std::string l_seq;
  bool base_loop = true;
  std::size_t n_vertices = 6;
  double density = 0.4;
  std::uint64_t seed = 1;
  bool two_sided = false;
  std::string graph;
  std::string config;
  std::string vertex;
  std::size_t n_max = 30;
  std::string path_class = "source";
  std::size_t stride = 0;
  double tol = 0.1;
  std::string format = "json";
  std::string out;
  std::size_t af_n = 2;
  std::vector<std::size_t> radii{5, 9, 13, 17, 21};
};

std::size_t max_degree() {
  const char* env = std::getenv("GRAPHENT_MAX_DEGREE");
  if (!env || !*env) return graphent::kDefaultMaxDegree;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(env, &pos);
    if (pos != std::string(env).size() || v == 0) throw std::invalid_argument(env);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    graphent::raise(graphent::ErrorKind::InvalidParams,
                    std::string("GRAPHENT_MAX_DEGREE is not a positive integer: ") + env);
  }
}

graphent::Family load(const Options& o) {
  const int sources = !o.family.empty() + !o.graph.empty() + !o.config.empty();
  if (sources != 1) {
    graphent::raise(graphent::ErrorKind::InvalidParams,
                    "give exactly one of --family, --graph, --config");
  }
  if (!o.graph.empty()) {
    return graphent::finite_family(graphent::load_edge_list(o.graph), "", "finite");
  }
  if (!o.config.empty()) return graphent::load_family(o.config);
  nlohmann::json spec = {{"family", o.family}};
  if (o.family == "salama_pp") spec["p"] = o.p;
  if (o.family == "salama") {
    spec["r"] = o.r_seq;
    spec["l"] = o.l_seq;
    spec["base_loop"] = o.base_loop;
  }
  if (o.family == "ray") spec["two_sided"] = o.two_sided;
  if (o.family == "random_strongly_connected") {
    spec["n"] = o.n_vertices;
    spec["density"] = o.density;
    spec["seed"] = o.seed;
  }
  return graphent::make_family(spec);
}

graphent::GraphWindow window_for(const graphent::Family& family,
                                 const std::string& vertex, std::size_t radius) {
  if (family.finite) return graphent::whole_graph_window(*family.finite);
  return graphent::materialize(family.oracle, {vertex}, radius, max_degree());
}

json config_echo(const Options& o, const graphent::Family& family,
                 const std::string& vertex) {
  json c = {{"command", o.command}};
  if (!o.graph.empty()) c["graph"] = o.graph;
  if (!o.config.empty()) c["config"] = o.config;
  c["family"] = family.descriptor.name;
  c["params"] = family.descriptor.params;
  c["vertex"] = vertex;
  c["n_max"] = o.n_max;
  if (o.command == "counts") c["class"] = o.path_class;
  if (o.stride) c["stride"] = o.stride;
  c["tol"] = o.tol;
  if (o.command == "af") c["n"] = o.af_n;
  if (o.command == "subgraphs") c["radii"] = o.radii;
  c["format"] = o.format;
  return c;
}

json header(const Options& o, const graphent::Family& family,
            const std::string& vertex, const std::vector<std::size_t>& radii,
            bool saturated) {
  return {{"tool", "graphent"},
          {"version", graphent::kVersion},
          {"config", config_echo(o, family, vertex)},
          {"window", {{"radii", radii}, {"saturated", saturated}}}};
}

json reference(const graphent::Family& family) {
  if (!family.descriptor.known_entropies) return nullptr;
  const auto& k = *family.descriptor.known_entropies;
  return {{"h_l", graphent::round12(k.h_l)},
          {"h_b", graphent::round12(k.h_b)},
          {"h_b_t", graphent::round12(k.h_b_t)},
          {"provenance", k.provenance}};
}

void write_csv_header(std::ostream& out, const json& head) {
  out << "# tool: graphent " << graphent::kVersion << '\n';
  out << "# config: " << head.at("config").dump() << '\n';
  out << "# window: " << head.at("window").dump() << '\n';
}

std::string fmt12(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

void write_estimate_rows(std::ostream& out,
                         const std::vector<graphent::EntropyEstimate>& estimates) {
  out << "quantity,value_nats,value_bits,method,stride,n_lo,n_hi\n";
  for (const auto& e : estimates) {
    out << e.quantity << ',' << fmt12(e.value) << ',' << fmt12(e.value / std::log(2.0))
        << ',' << graphent::to_string(e.method) << ',' << e.stride << ','
        << e.n_lo << ',' << e.n_hi << '\n';
  }
}

void emit(std::ostream& out, json head, const char* key, json body) {
  head[key] = std::move(body);
  out << head.dump(2) << '\n';
}

int run_counts(const Options& o, const graphent::Family& family,
               const std::string& vertex, std::ostream& out) {
  const auto cls = graphent::parse_path_class(o.path_class);
  const auto window = window_for(family, vertex, o.n_max);
  const auto series = graphent::count_class(window, vertex, cls, o.n_max);
  const auto head = header(o, family, vertex, {window.radius}, window.saturated);
  if (o.format == "csv") {
    write_csv_header(out, head);
    graphent::write_csv(out, series);
  } else {
    emit(out, head, "counts", graphent::to_json(series));
  }
  return 0;
}

graphent::GrowthOptions growth_options(const Options& o) {
  graphent::GrowthOptions g;
  if (o.stride) g.stride = o.stride;
  return g;
}

int run_entropy(const Options& o, const graphent::Family& family,
                const std::string& vertex, std::ostream& out) {
  const auto window = window_for(family, vertex, o.n_max);
  const VertexId v = window.vertex(vertex);
  const auto go = growth_options(o);
  std::vector<graphent::EntropyEstimate> estimates{
      graphent::loop_entropy(window, v, o.n_max, go),
      graphent::block_entropy(window, v, o.n_max, go),
      graphent::coblock_entropy(window, v, o.n_max, go),
      graphent::radius_inverse(
          graphent::count_class(window, v, graphent::PathClass::SourceStar, o.n_max), go),
      graphent::radius_inverse(
          graphent::count_class(window, v, graphent::PathClass::RangeStar, o.n_max), go)};
  if (family.finite) estimates.push_back(graphent::finite_entropy(*family.finite));
  const auto head = header(o, family, vertex, {window.radius}, window.saturated);
  if (o.format == "csv") {
    write_csv_header(out, head);
    write_estimate_rows(out, estimates);
    return 0;
  }
  json body = json::array();
  for (const auto& e : estimates) body.push_back(graphent::to_json(e));
  json report = {{"estimates", body}, {"reference", reference(family)}};
  emit(out, head, "entropy", report);
  return 0;
}

int run_sandwich(const Options& o, const graphent::Family& family,
                 const std::string& vertex, std::ostream& out) {
  const auto window = window_for(family, vertex, o.n_max);
  const auto report = graphent::sandwich(window, window.vertex(vertex), o.n_max, o.tol);
  const auto head = header(o, family, vertex, {window.radius}, window.saturated);
  if (o.format == "csv") {
    write_csv_header(out, head);
    write_estimate_rows(out, {report.h_l, report.h_b, report.h_b_t});
    out << "# lower: " << fmt12(report.lower) << '\n'
        << "# upper: " << fmt12(report.upper) << '\n'
        << "# exact: " << (report.exact ? "true" : "false") << '\n';
    return 0;
  }
  json body = graphent::to_json(report);
  body["reference"] = reference(family);
  emit(out, head, "sandwich", body);
  return 0;
}

graphent::IdentityReport transpose_duality(const graphent::GraphWindow& window,
                                           VertexId v, std::size_t n_max) {
  using graphent::PathClass;
  graphent::GraphWindow flipped = window;
  flipped.graph = graphent::transpose(window.graph);
  std::swap(flipped.forward_distance, flipped.backward_distance);
  graphent::IdentityReport report{"transpose_duality", true, n_max, {}};
  const std::pair<PathClass, PathClass> pairs[] = {
      {PathClass::Source, PathClass::Range},
      {PathClass::SourceStar, PathClass::RangeStar},
      {PathClass::Loop, PathClass::Loop},
      {PathClass::Through, PathClass::Through}};
  for (const auto& [a, b] : pairs) {
    const auto lhs = graphent::count_class(window, v, a, n_max);
    const auto rhs = graphent::count_class(flipped, v, b, n_max);
    for (std::size_t n = 0; n <= n_max; ++n) {
      if (lhs[n] != rhs[n]) {
        report.passed = false;
        report.failures.push_back({n, lhs[n], rhs[n]});
      }
    }
  }
  return report;
}

int run_verify(const Options& o, const graphent::Family& family,
               const std::string& vertex, std::ostream& out) {
  const auto window = window_for(family, vertex, o.n_max);
  const VertexId v = window.vertex(vertex);
  std::vector<graphent::IdentityReport> identities{
      graphent::convolution_check(window, v, o.n_max),
      graphent::renewal_check(window, v, o.n_max),
      transpose_duality(window, v, o.n_max)};
  std::vector<graphent::CheckReport> checks{
      graphent::block_vs_radius_check(window, v, o.n_max, o.tol),
      graphent::through_vs_blocks_check(window, v, o.n_max, o.tol)};
  std::string skipped;
  if (family.finite && graphent::is_irreducible(*family.finite)) {
    checks.insert(checks.begin() + 1,
                  graphent::finite_coincidence_check(*family.finite, v, o.n_max, o.tol));
  } else {
    skipped = family.finite ? "finite_coincidence: graph is not irreducible"
                            : "finite_coincidence: graph is not finite";
  }
  bool ok = true;
  for (const auto& r : identities) ok = ok && r.passed;
  for (const auto& r : checks) ok = ok && r.passed;
  const auto head = header(o, family, vertex, {window.radius}, window.saturated);
  if (o.format == "csv") {
    write_csv_header(out, head);
    out << "check,passed\n";
    for (const auto& r : identities) out << r.name << ',' << (r.passed ? 1 : 0) << '\n';
    for (const auto& r : checks) out << r.name << ',' << (r.passed ? 1 : 0) << '\n';
    if (!skipped.empty()) out << "# skipped: " << skipped << '\n';
  } else {
    json body = json::array();
    for (const auto& r : identities) body.push_back(graphent::to_json(r));
    for (const auto& r : checks) body.push_back(graphent::to_json(r));
    json report = {{"passed", ok}, {"checks", body}};
    if (!skipped.empty()) report["skipped"] = skipped;
    report["reference"] = reference(family);
    emit(out, head, "verify", report);
  }
  if (!ok) std::cerr << "graphent: verification failed\n";
  return ok ? 0 : 1;
}

int run_af(const Options& o, const graphent::Family& family,
           const std::string& vertex, std::ostream& out) {
  const auto window = window_for(family, vertex, 2 * o.af_n);
  const VertexId v = window.vertex(vertex);
  const auto hom = graphent::verify_homomorphism(window, v, o.af_n);
  graphent::IndependenceHypotheses hyp;
  if (!family.finite) {
    hyp.asserted_irreducible = family.descriptor.asserts("irreducible");
    hyp.asserted_multiple_vertices = true;
  }
  const auto ind = graphent::verify_independence(window, v, o.af_n, hyp);
  const auto dims = graphent::dimension_report(window, v, o.af_n);
  const bool ok = hom.passed && (!ind.applicable || ind.passed);
  const auto head = header(o, family, vertex, {window.radius}, window.saturated);
  if (o.format == "csv") {
    write_csv_header(out, head);
    out << "check,passed,applicable,checked,violations\n";
    for (const auto* r : {&hom, &ind}) {
      out << r->name << ',' << r->passed << ',' << r->applicable << ','
          << r->checked << ',' << r->violations << '\n';
    }
    out << "# omega_cardinality: " << dims.omega_cardinality.get_str() << '\n'
        << "# r_n: " << dims.r_n.get_str() << '\n'
        << "# r_n_squared: " << dims.r_n_squared.get_str() << '\n';
  } else {
    json report = {{"passed", ok},
                   {"homomorphism", graphent::to_json(hom)},
                   {"independence", graphent::to_json(ind)},
                   {"dimensions", graphent::to_json(dims)}};
    emit(out, head, "af", report);
  }
  if (!ok) std::cerr << "graphent: verification failed\n";
  return ok ? 0 : 1;
}

int run_subgraphs(const Options& o, const graphent::Family& family,
                  const std::string& vertex, std::ostream& out) {
  const auto values = graphent::subgraph_supremum(family.oracle, vertex, o.radii);
  const auto head = header(o, family, vertex, o.radii, false);
  if (o.format == "csv") {
    write_csv_header(out, head);
    out << "radius,entropy\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << o.radii[i] << ',' << fmt12(values[i]) << '\n';
    }
    return 0;
  }
  json rows = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows.push_back({{"radius", o.radii[i]}, {"entropy", graphent::round12(values[i])}});
  }
  emit(out, head, "subgraphs", {{"values", rows}, {"reference", reference(family)}});
  return 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "builtin family name");
  sub->add_option("--p", o.p, "parameter of salama_pp");
  sub->add_option("--r", o.r_seq, "edge multiplicities of salama (const:c, affine:a,b, list:x,y|rule)");
  sub->add_option("--l", o.l_seq, "chain lengths of salama");
  sub->add_option("--base-loop", o.base_loop, "self-loop at 0 for salama");
  sub->add_option("--vertices", o.n_vertices, "vertex count of random_strongly_connected");
  sub->add_option("--density", o.density, "extra-edge density of random_strongly_connected");
  sub->add_option("--seed", o.seed, "seed of random_strongly_connected");
  sub->add_flag("--two-sided", o.two_sided, "two-sided ray");
  sub->add_option("--graph", o.graph, "edge-list file");
  sub->add_option("--config", o.config, "family JSON file");
  sub->add_option("--vertex", o.vertex, "base vertex (default: family root)");
  sub->add_option("--nmax", o.n_max, "largest path length")->check(CLI::PositiveNumber);
  sub->add_option("--tol", o.tol, "tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", o.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path counts and entropy invariants of locally finite directed graphs"};
  app.require_subcommand(1);
  Options o;
  auto* counts = app.add_subcommand("counts", "exact path counts of one class");
  auto* entropy = app.add_subcommand("entropy", "loop, block and radius estimates");
  auto* sandwich = app.add_subcommand("sandwich", "lower and upper entropy bounds");
  auto* verify = app.add_subcommand("verify", "identity and estimate checks");
  auto* af = app.add_subcommand("af", "matrix-unit representation checks");
  auto* subgraphs = app.add_subcommand("subgraphs", "entropy of growing finite windows");
  for (auto* sub : {counts, entropy, sandwich, verify, af, subgraphs}) add_common(sub, o);
  counts->add_option("--class", o.path_class,
                     "through, source, source-star, range, range-star, loop");
  for (auto* sub : {counts, entropy}) {
    sub->add_option("--stride", o.stride, "estimate along one residue class");
  }
  af->add_option("--n", o.af_n, "truncation length");
  subgraphs->add_option("--radii", o.radii, "increasing window radii")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (auto* sub : app.get_subcommands()) o.command = sub->get_name();

  try {
    const graphent::Family family = load(o);
    const std::string vertex = o.vertex.empty() ? family.oracle.root : o.vertex;
    std::ofstream file;
    if (!o.out.empty()) {
      file.open(o.out);
      if (!file) graphent::raise(graphent::ErrorKind::InvalidParams, "cannot write " + o.out);
    }
    std::ostream& out = o.out.empty() ? std::cout : file;
    if (o.command == "counts") return run_counts(o, family, vertex, out);
    if (o.command == "entropy") return run_entropy(o, family, vertex, out);
    if (o.command == "sandwich") return run_sandwich(o, family, vertex, out);
    if (o.command == "verify") return run_verify(o, family, vertex, out);
    if (o.command == "af") return run_af(o, family, vertex, out);
    return run_subgraphs(o, family, vertex, out);
  } catch (const graphent::Error& e) {
    std::cerr << "graphent: " << graphent::to_string(e.kind()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "graphent: " << e.what() << '\n';
    return 2;
  }
}
