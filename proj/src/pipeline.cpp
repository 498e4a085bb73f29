#include "ssg/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "ssg/assembly.hpp"
#include "ssg/eigensolve.hpp"
#include "ssg/error.hpp"
#include "ssg/localization.hpp"
#include "ssg/spectral_analysis.hpp"

namespace ssg {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::io_failure, "cannot create " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_failure, "cannot write " + (dir_ / name).string());
    out << content;
    if (!out) throw Error(ErrorCode::io_failure, "write failed for " + (dir_ / name).string());
    written_.push_back(name);
  }

  std::vector<std::string> written() const { return written_; }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

std::string spectrum_csv(const Spectrum& spectrum, ClusterOptions options) {
  std::ostringstream out;
  out << "index,eigenvalue,cluster_id,multiplicity\n";
  const auto clusters = cluster_multiplicities(spectrum.values, options);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (auto i : clusters[c].members) {
      out << i + 1 << ',' << fmt(spectrum.values[static_cast<Eigen::Index>(i)]) << ',' << c << ','
          << clusters[c].count << '\n';
    }
  }
  return out.str();
}

json spectrum_stats(const Spectrum& spectrum, ClusterOptions options) {
  const auto clusters = cluster_multiplicities(spectrum.values, options);
  std::size_t largest = 0;
  for (const auto& c : clusters) largest = std::max(largest, c.count);
  json j;
  j["dimension"] = spectrum.size();
  j["lambda_min"] = spectrum.size() ? spectrum.values[0] : 0.0;
  j["lambda_max"] = spectrum.size() ? spectrum.values[spectrum.values.size() - 1] : 0.0;
  j["clusters"] = clusters.size();
  j["largest_cluster"] = largest;
  return j;
}

json interlacing(const Spectrum& d, const Spectrum& n) {
  const InterlacingReport r = check_interlacing(counting(d), counting(n));
  return {{"holds", r.holds}, {"excess_dirichlet", r.excess_dirichlet}, {"excess_neumann", r.excess_neumann}};
}

struct Setup {
  CompatibleSequence seq;
  MeasureSpec spec;
  SsgGraph graph;
  MassVector mass;
  DiscreteForm full;
};

Setup make_problem(const RunConfig& c, int subdivisions) {
  CompatibleSequence seq = c.sequence.build();
  MeasureSpec spec(c.eta, c.beta);
  SsgGraph graph = build_ssg_graph(seq, c.level, subdivisions, c.alpha);
  MassVector mass = lump_measure(graph, spec);
  DiscreteForm full = make_form(graph, mass);
  return {std::move(seq), spec, std::move(graph), std::move(mass), std::move(full)};
}

Spectrum dirichlet_spectrum(const SsgGraph& graph, const DiscreteForm& full) {
  return solve_by_symmetry(graph, apply_dirichlet(full, graph.outer_corners()), ssg::Problem::dirichlet);
}

json fit_json(const CountingFunction& n, double fit_decades, std::size_t per_decade, double target) {
  json j;
  const double top = n.resolved_max();
  const Window w{top / std::pow(10.0, fit_decades), top};
  j["window"] = {w.lo, w.hi};
  j["target_slope"] = target;
  try {
    const ExponentFit fit = fit_exponent(n, w, per_decade);
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["eigenvalues_in_window"] = fit.eigenvalues_in_window;
    j["relative_error"] = std::abs(fit.slope - target) / target;
  } catch (const Error& e) {
    j["slope"] = nullptr;
    j["error"] = e.what();
  }
  return j;
}

}  // namespace

RunConfig only(const RunConfig& config, Analysis analysis) {
  RunConfig c = config;
  c.analyses = {analysis};
  validate(c);
  return c;
}

std::vector<std::string> run_build(const RunConfig& config, const fs::path& out_dir) {
  validate(config);
  Writer writer(out_dir);
  const Setup p = make_problem(config, config.subdivisions);
  std::ostringstream vertices;
  vertices << "vertex_id,x,y\n";
  for (std::size_t v = 0; v < p.graph.vertex_count(); ++v) {
    vertices << to_string(p.graph.vertices()[v]) << ',' << fmt(p.graph.coords()[v].x) << ',' << fmt(p.graph.coords()[v].y)
             << '\n';
  }
  writer.write("vertices.csv", vertices.str());
  std::ostringstream edges;
  edges << "u,v,conductance\n";
  for (const auto& e : p.graph.edges()) edges << e.u << ',' << e.v << ',' << fmt(e.conductance) << '\n';
  writer.write("edges.csv", edges.str());
  if (config.dump_matrix) {
    std::ostringstream k;
    for (Eigen::Index col = 0; col < p.full.stiffness.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(p.full.stiffness, col); it; ++it) {
        k << it.row() << ' ' << it.col() << ' ' << fmt(it.value()) << '\n';
      }
    }
    writer.write("stiffness.txt", k.str());
  }
  json summary;
  summary["config"] = json::parse(serialize_config(config));
  summary["graph"] = {{"vertices", p.graph.vertex_count()},
                      {"edges", p.graph.edges().size()},
                      {"total_mass", p.mass.total()},
                      {"connected", is_connected(p.graph)}};
  writer.write("summary.json", summary.dump(2) + "\n");
  return writer.written();
}

std::vector<std::string> run(const RunConfig& config, const fs::path& out_dir) {
  validate(config);
  Writer writer(out_dir);
  const ClusterOptions clusters{config.tolerances.cluster_rel, config.tolerances.cluster_abs_floor};
  const auto per_decade = static_cast<std::size_t>(config.points_per_decade);
  json summary;
  summary["config"] = json::parse(serialize_config(config));

  const bool needs_ssg = config.wants(Analysis::spectrum) || config.wants(Analysis::weyl) ||
                         config.wants(Analysis::renewal) || config.wants(Analysis::resistance);
  std::optional<Setup> p;
  if (needs_ssg || config.wants(Analysis::localization)) {
    p = make_problem(config, config.subdivisions);
    summary["graph"] = {{"vertices", p->graph.vertex_count()},
                        {"edges", p->graph.edges().size()},
                        {"total_mass", p->mass.total()}};
  }

  const bool spectral = config.wants(Analysis::weyl) || config.wants(Analysis::renewal);
  const bool want_d = spectral || (config.wants(Analysis::spectrum) && config.boundary != BoundaryMode::neumann);
  const bool want_n = config.wants(Analysis::spectrum) && config.boundary != BoundaryMode::dirichlet;
  std::optional<Spectrum> dspec;
  std::optional<Spectrum> nspec;
  if (want_d || want_n) {
    // Independent solves; each is single-threaded and deterministic.
    std::future<Spectrum> fd;
    std::future<Spectrum> fn;
    if (want_d) fd = std::async(std::launch::async, [&] { return dirichlet_spectrum(p->graph, p->full); });
    if (want_n) fn = std::async(std::launch::async, [&] { return solve_by_symmetry(p->graph, p->full, ssg::Problem::neumann); });
    if (want_d) dspec = fd.get();
    if (want_n) nspec = fn.get();
  }

  if (config.wants(Analysis::spectrum)) {
    json s;
    if (dspec && config.boundary != BoundaryMode::neumann) {
      writer.write("spectrum.csv", spectrum_csv(*dspec, clusters));
      s["dirichlet"] = spectrum_stats(*dspec, clusters);
    }
    if (nspec) {
      writer.write(config.boundary == BoundaryMode::both ? "spectrum_neumann.csv" : "spectrum.csv",
                   spectrum_csv(*nspec, clusters));
      s["neumann"] = spectrum_stats(*nspec, clusters);
    }
    if (dspec && nspec) s["interlacing"] = interlacing(*dspec, *nspec);
    summary["spectrum"] = s;
  }

  std::optional<CountingFunction> n;
  if (spectral) {
    n = counting(*dspec);
    if (config.refine) {
      const Setup fine = make_problem(config, 2 * config.subdivisions);
      n->set_resolved_max(resolved_max(*dspec, dirichlet_spectrum(fine.graph, fine.full), config.tolerances.resolved_shift));
    }
    summary["resolved_max"] = n->resolved_max();
    summary["resolved_count"] = (*n)(n->resolved_max());
  }

  if (config.wants(Analysis::weyl)) {
    const SpectralDimension d = spectral_dimension(p->spec, p->seq);
    json w;
    w["d_s"] = d.value;
    w["regime"] = d.regime == MeasureRegime::line ? "line" : "mixed";
    w["fit"] = fit_json(*n, config.fit_decades, per_decade, d.value / 2.0);
    try {
      const AsymptoticsReport rep = weyl_oscillation(*n, d.value, last_decade(*n), per_decade, clusters);
      std::ostringstream csv;
      csv << "x,N,W\n";
      for (const auto& s : rep.samples) csv << fmt(s.x) << ',' << s.count << ',' << fmt(s.w) << '\n';
      writer.write("weyl.csv", csv.str());
      w["window"] = {rep.window.lo, rep.window.hi};
      w["osc_min"] = rep.osc_min;
      w["osc_max"] = rep.osc_max;
      w["osc_ratio"] = rep.osc_ratio;
      json jumps = json::array();
      for (const auto& jmp : rep.jumps) jumps.push_back({{"x", jmp.x}, {"multiplicity", jmp.multiplicity}, {"jump", jmp.jump}});
      w["jumps"] = jumps;
    } catch (const Error& e) {
      w["error"] = e.what();
    }
    summary["weyl"] = w;
  }

  if (config.wants(Analysis::renewal)) {
    const RenewalReport rep = renewal_analysis(*n, p->spec, p->seq,
                                               {static_cast<std::size_t>(config.points_per_window), 256});
    std::ostringstream csv;
    csv << "t,window,f\n";
    for (const auto& s : rep.samples) csv << fmt(s.t) << ',' << s.window << ',' << fmt(s.f) << '\n';
    writer.write("renewal.csv", csv.str());
    json r;
    r["T"] = rep.period;
    r["d_s"] = rep.d_s;
    r["scale"] = rep.scale;
    r["window_gaps"] = rep.window_gaps;
    r["gaps_decreasing_last3"] = rep.gaps_decreasing_last3;
    r["identity_error"] = rep.identity_error;
    r["g_estimate"] = rep.g_estimate;
    json rs = json::array();
    for (const auto& [x, value] : rep.r_samples) rs.push_back({x, value});
    r["R_samples"] = rs;
    summary["renewal"] = r;
  }

  if (config.wants(Analysis::localization)) {
    const LocalizationReport rep = localize(p->seq, config.level, config.subdivisions, p->spec,
                                            {config.max_depth, config.tolerances.residual, clusters});
    json l;
    json pairs = json::array();
    for (const auto& d : rep.dn_pairs) pairs.push_back({{"lambda", d.lambda}, {"residual_d", d.residual_d}, {"residual_n", d.residual_n}});
    l["dn_pairs"] = pairs;
    if (rep.glued) {
      l["glued"] = {{"lambda", rep.glued->lambda},
                    {"residual", rep.glued->residual},
                    {"residual_neumann", rep.glued->residual_neumann},
                    {"rotation_error", rep.glued->rotation_error},
                    {"reflection_error", rep.glued->reflection_error}};
    }
    json depths = json::array();
    for (const auto& d : rep.depths) {
      depths.push_back({{"n", d.depth},
                        {"nu", d.nu},
                        {"source_lambda", d.source_lambda},
                        {"source_residual", d.source_residual},
                        {"residual", d.residual},
                        {"multiplicity", d.multiplicity},
                        {"support_fraction", d.support_fraction}});
    }
    l["depths"] = depths;
    if (rep.bounds) {
      const auto& b = *rep.bounds;
      l["bounds"] = {{"lambda_sixth_min", b.lambda_sixth_min},
                     {"lower", b.lower},
                     {"lower_slack", b.lower_slack},
                     {"upper", b.upper},
                     {"test_cell", b.test_cell.str()},
                     {"test_rayleigh", b.test_rayleigh},
                     {"test_mass", b.test_mass},
                     {"test_cell_mass", b.test_cell_mass},
                     {"upper_holds", b.upper_holds},
                     {"lower_holds", b.lower_holds}};
    }
    l["rate"] = rep.rate;
    l["c1"] = rep.c1;
    l["c2"] = rep.c2;
    writer.write("localization.json", l.dump(2) + "\n");
    summary["localization"] = {{"dn_pairs", rep.dn_pairs.size()}, {"depths", rep.depths.size()}};
  }

  if (config.wants(Analysis::resistance)) {
    const auto& o = p->graph.outer_corners();
    summary["resistance"] = {{"R12", effective_resistance(p->graph, o[0], o[1])},
                             {"R13", effective_resistance(p->graph, o[0], o[2])},
                             {"R23", effective_resistance(p->graph, o[1], o[2])}};
  }

  if (config.wants(Analysis::sg_compare)) {
    const MeasureSpec unused(1.0, 0.25);
    auto sg_spectrum = [&](int level) {
      const SsgGraph g = build_sg_graph(level);
      return dirichlet_spectrum(g, make_form(g, lump_measure(g, unused)));
    };
    const Spectrum coarse = sg_spectrum(config.level);
    CountingFunction sg = counting(coarse);
    if (config.refine) sg.set_resolved_max(resolved_max(coarse, sg_spectrum(config.level + 1), config.tolerances.resolved_shift));
    writer.write("sg_spectrum.csv", spectrum_csv(coarse, clusters));
    const double d = std::log(9.0) / std::log(5.0);
    summary["sg_compare"] = {{"d_s", d},
                             {"resolved_max", sg.resolved_max()},
                             {"fit", fit_json(sg, config.fit_decades, per_decade, d / 2.0)}};
  }

  writer.write("summary.json", summary.dump(2) + "\n");
  return writer.written();
}

}  // namespace ssg
