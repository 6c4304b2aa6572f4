// riafold -- python bindings for the main operations.
//
// One Session object owns the parsed alignment pair, the admissibility
// masks, the energy model, and the filled inside tables; its methods wrap
// the library calls one-to-one.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "riafold/common.hpp"
#include "riafold/compat.hpp"
#include "riafold/constraints.hpp"
#include "riafold/energy.hpp"
#include "riafold/engine.hpp"
#include "riafold/joint_structure.hpp"
#include "riafold/msa.hpp"
#include "riafold/oracle.hpp"
#include "riafold/params.hpp"

namespace py = pybind11;
using namespace riafold;

namespace {

struct Session {
  PairedAlignment pa;
  CompatibilityMasks masks;
  EnergyModel em;
  std::unique_ptr<InsideTables> tables;

  Session(const std::string& r_msa_text, const std::string& s_msa_text,
          const std::string& format, const std::string& r_constraints,
          const std::string& s_constraints, const std::string& params_text,
          bool zero_energy, double scale) {
    MsaFormat fmt;
    if (format == "clustal")
      fmt = MsaFormat::Clustal;
    else if (format == "fasta")
      fmt = MsaFormat::AlignedFasta;
    else
      throw FormatError("unknown alignment format '" + format +
                        "' (expected clustal or fasta)");
    Msa r = parse_msa(r_msa_text, fmt, Orientation::FivePrimeToThreePrime);
    Msa s = parse_msa(s_msa_text, fmt, Orientation::ThreePrimeToFivePrime);
    pa = expand_interaction_pairs(r, s);

    ParamsFile pf;
    if (!params_text.empty()) pf = parse_params(params_text);
    if (zero_energy) pf.energy = EnergyModel::zero();
    em = pf.energy;

    ConstraintSet cs = ConstraintSet::none(pa.n(), pa.m_len());
    if (!r_constraints.empty() || !s_constraints.empty())
      cs = parse_constraints(r_constraints, s_constraints);
    masks = build_masks(pa, pf.fold, cs);

    double use_scale = scale > 0.0 ? scale : pf.scale;
    tables = std::make_unique<InsideTables>(
        partition_function(pa, masks, em, EngineConfig{use_scale}));
  }

  double z() const { return tables->z(); }
  double free_energy() const { return tables->free_energy(); }
  int n() const { return tables->n(); }
  int m_len() const { return tables->m_len(); }

  py::dict pair_probs() const {
    ProbMatrices pm = pair_probabilities(*tables);
    py::dict d;
    d["interior_r"] = pm.p_interior_r;
    d["interior_s"] = pm.p_interior_s;
    d["ext"] = pm.p_ext;
    return d;
  }

  py::dict hybrid_probs() const {
    HybridProb hp = hybrid_probabilities(*tables);
    py::dict d;
    for (const auto& kv : hp)
      d[py::make_tuple(std::get<0>(kv.first), std::get<1>(kv.first),
                       std::get<2>(kv.first), std::get<3>(kv.first))] =
          kv.second;
    return d;
  }

  std::vector<std::pair<std::string, std::string>> draw(
      int count, std::uint64_t seed) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const JointStructure& js : sample(*tables, count, seed))
      out.push_back(to_notation(js));
    return out;
  }

  py::tuple region(const std::string& strand, int a, int b, int nsamples,
                   std::uint64_t seed) const {
    HybridProb hp = hybrid_probabilities(*tables);
    int side;
    if (strand == "R" || strand == "r")
      side = 0;
    else if (strand == "S" || strand == "s")
      side = 1;
    else
      throw BoundsError("strand must be 'R' or 'S'");
    RegionProb rp =
        contact_region_probability(*tables, hp, side, a, b, nsamples, seed);
    return py::make_tuple(rp.value, rp.stderr_est, rp.exact);
  }
};

}  // namespace

PYBIND11_MODULE(_riafold, mod) {
  mod.doc() =
      "Joint interaction-structure ensembles for a pair of RNA alignments.";

  py::class_<Session>(mod, "Session")
      .def(py::init<const std::string&, const std::string&,
                    const std::string&, const std::string&,
                    const std::string&, const std::string&, bool, double>(),
           py::arg("r_msa"), py::arg("s_msa"), py::arg("format") = "clustal",
           py::arg("r_constraints") = "", py::arg("s_constraints") = "",
           py::arg("params") = "", py::arg("zero_energy") = false,
           py::arg("scale") = 0.0)
      .def_property_readonly("z", &Session::z)
      .def_property_readonly("free_energy", &Session::free_energy)
      .def_property_readonly("n", &Session::n)
      .def_property_readonly("m_len", &Session::m_len)
      .def("pair_probabilities", &Session::pair_probs)
      .def("hybrid_probabilities", &Session::hybrid_probs)
      .def("sample", &Session::draw, py::arg("count"), py::arg("seed") = 1)
      .def("contact_region_probability", &Session::region, py::arg("strand"),
           py::arg("a"), py::arg("b"), py::arg("nsamples") = 100000,
           py::arg("seed") = 1);
}
