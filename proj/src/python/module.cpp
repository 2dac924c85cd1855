// Python bindings for the core operations: field arithmetic, the shifted
// power-sum constructions with their closed-form inverses, family
// verification, and deterministic sweeps.  Structured results cross the
// boundary as JSON strings and are parsed into dicts by the package wrapper.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppinv/families.hpp"
#include "ppinv/field.hpp"
#include "ppinv/linearized.hpp"
#include "ppinv/mapping.hpp"
#include "ppinv/verify.hpp"

namespace py = pybind11;
using namespace ppinv;

namespace {

// Thin handle keeping the shared field context alive across python calls.
struct PyField {
  FieldRef ctx;

  explicit PyField(uint64_t p, uint32_t n) : ctx(mk_field(p, n)) {}
  const FieldCtx& F() const { return *ctx; }
};

GSpec make_gspec(const PyField& f,
                 const std::vector<std::pair<uint64_t, uint64_t>>& terms, uint64_t delta) {
  GSpec g;
  for (const auto& [b, s] : terms)
    g.terms.push_back({f.F().elem(b), BigInt(static_cast<unsigned long>(s))});
  g.delta = f.F().elem(delta);
  return g;
}

py::dict mapping_to_py(const Mapping& map) {
  py::dict d;
  d["domain"] = map.domain;
  d["image"] = map.image;
  return d;
}

SweepStrategy strategy_from(const std::string& s) {
  if (s == "automatic") return SweepStrategy::automatic;
  if (s == "exhaustive") return SweepStrategy::exhaustive;
  if (s == "sampled") return SweepStrategy::sampled;
  throw std::invalid_argument("unknown strategy: " + s);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Permutation families over GF(q^2) with closed-form inverses";

  py::class_<PyField>(mod, "Field")
      .def(py::init<uint64_t, uint32_t>(), py::arg("p"), py::arg("n"))
      .def_property_readonly("p", [](const PyField& f) { return f.F().p(); })
      .def_property_readonly("n", [](const PyField& f) { return f.F().n(); })
      .def_property_readonly("order", [](const PyField& f) { return f.F().order(); })
      .def_property_readonly("modulus", [](const PyField& f) { return f.F().modulus(); })
      .def_property_readonly("primitive",
                             [](const PyField& f) { return f.F().primitive().enc; })
      .def("descriptor", [](const PyField& f) { return f.F().descriptor_json(); })
      .def("add", [](const PyField& f, uint64_t a, uint64_t b) {
        return f.F().add(f.F().elem(a), f.F().elem(b)).enc;
      })
      .def("sub", [](const PyField& f, uint64_t a, uint64_t b) {
        return f.F().sub(f.F().elem(a), f.F().elem(b)).enc;
      })
      .def("neg", [](const PyField& f, uint64_t a) { return f.F().neg(f.F().elem(a)).enc; })
      .def("mul", [](const PyField& f, uint64_t a, uint64_t b) {
        return f.F().mul(f.F().elem(a), f.F().elem(b)).enc;
      })
      .def("inv", [](const PyField& f, uint64_t a) { return f.F().inv(f.F().elem(a)).enc; })
      .def("pow", [](const PyField& f, uint64_t a, uint64_t e) {
        return f.F().pow_u64(f.F().elem(a), e).enc;
      })
      .def("frobenius", [](const PyField& f, uint64_t a, uint32_t k) {
        return f.F().frobenius(f.F().elem(a), k).enc;
      })
      .def("trace_rel", [](const PyField& f, uint64_t a, uint32_t m) {
        return f.F().trace_rel(f.F().elem(a), m).enc;
      })
      .def("norm_rel", [](const PyField& f, uint64_t a, uint32_t d) {
        return f.F().norm_rel(f.F().elem(a), d).enc;
      })
      .def("subfield", [](const PyField& f, uint32_t m) {
        std::vector<uint64_t> out;
        for (const FieldElem& x : f.F().subfield_elements(m)) out.push_back(x.enc);
        return out;
      })
      .def("in_subfield", [](const PyField& f, uint64_t a, uint32_t d) {
        return f.F().in_subfield_deg(f.F().elem(a), d);
      })
      .def("__repr__", [](const PyField& f) {
        return "Field(p=" + std::to_string(f.F().p()) + ", n=" + std::to_string(f.F().n()) +
               ")";
      });

  mod.def("families", [] {
    py::list out;
    for (const FamilyDescriptor& d : catalog()) {
      py::dict e;
      e["id"] = d.id;
      e["variants"] = d.variants;
      e["summary"] = d.summary;
      e["char_requirement"] = d.char_requirement;
      e["min_m"] = d.min_m;
      e["condition_kind"] = to_string(d.condition_kind);
      py::list schema;
      for (const ParamField& pf : d.param_schema) {
        py::dict s;
        s["name"] = pf.name;
        s["domain"] = pf.domain;
        s["repeated"] = pf.repeated;
        schema.append(s);
      }
      e["params"] = schema;
      out.append(e);
    }
    return out;
  });

  mod.def(
      "build_p",
      [](const PyField& f, uint32_t m,
         const std::vector<std::pair<uint64_t, uint64_t>>& terms, uint64_t delta) {
        return mapping_to_py(build_P(f.F(), make_gspec(f, terms, delta), m));
      },
      py::arg("field"), py::arg("m"), py::arg("terms"), py::arg("delta"));

  mod.def(
      "build_tau",
      [](const PyField& f, uint32_t m,
         const std::vector<std::pair<uint64_t, uint64_t>>& terms, uint64_t delta) {
        return mapping_to_py(build_tau(f.F(), make_gspec(f, terms, delta), m));
      },
      py::arg("field"), py::arg("m"), py::arg("terms"), py::arg("delta"));

  mod.def(
      "inverse_via_tau",
      [](const PyField& f, uint32_t m,
         const std::vector<std::pair<uint64_t, uint64_t>>& terms, uint64_t delta) {
        return mapping_to_py(inverse_via_tau(f.F(), make_gspec(f, terms, delta), m));
      },
      py::arg("field"), py::arg("m"), py::arg("terms"), py::arg("delta"));

  mod.def(
      "is_permutation_table",
      [](const PyField& f, const std::vector<uint64_t>& image) {
        Mapping map;
        map.ctx_id = f.F().id();
        for (const FieldElem& x : full_domain(f.F())) map.domain.push_back(x.enc);
        map.image = image;
        if (map.image.size() != map.domain.size())
          throw std::invalid_argument("image size must equal the field order");
        return is_permutation(map);
      },
      py::arg("field"), py::arg("image"));

  mod.def(
      "quartic_is_perm",
      [](const PyField& f, uint64_t a, uint64_t b, uint32_t m) {
        return quartic_is_perm(f.F(), f.F().elem(a), f.F().elem(b), m);
      },
      py::arg("field"), py::arg("a"), py::arg("b"), py::arg("m"));

  mod.def(
      "quartic_inverse_table",
      [](const PyField& f, uint64_t a, uint64_t b, uint32_t m) {
        LinearizedPoly poly = quartic_inverse(f.F(), f.F().elem(a), f.F().elem(b), m);
        std::vector<uint64_t> out;
        for (uint64_t x = 0; x < f.F().order(); ++x)
          out.push_back(eval_linearized(f.F(), poly, f.F().elem(x)).enc);
        return out;
      },
      py::arg("field"), py::arg("a"), py::arg("b"), py::arg("m"));

  mod.def(
      "binomial_is_perm",
      [](const PyField& f, uint64_t a, uint64_t q, uint32_t r, uint32_t M) {
        return binomial_is_perm(f.F(), f.F().elem(a), q, r, M);
      },
      py::arg("field"), py::arg("a"), py::arg("q"), py::arg("r"), py::arg("M"));

  mod.def(
      "binomial_inverse_table",
      [](const PyField& f, uint64_t a, uint64_t q, uint32_t r, uint32_t M) {
        LinearizedPoly poly = binomial_inverse(f.F(), f.F().elem(a), q, r, M);
        std::vector<uint64_t> out;
        for (uint64_t x = 0; x < f.F().order(); ++x)
          out.push_back(eval_linearized(f.F(), poly, f.F().elem(x)).enc);
        return out;
      },
      py::arg("field"), py::arg("a"), py::arg("q"), py::arg("r"), py::arg("M"));

  mod.def(
      "instance_json",
      [](const std::string& family, const PyField& f, uint32_t m, const ParamMap& params) {
        return instance_to_json(instantiate(family, f.ctx, m, params)).dump();
      },
      py::arg("family"), py::arg("field"), py::arg("m"), py::arg("params"));

  mod.def(
      "verify_json",
      [](const std::string& family, const PyField& f, uint32_t m, const ParamMap& params) {
        return report_to_json(verify_params(family, f.ctx, m, params)).dump();
      },
      py::arg("family"), py::arg("field"), py::arg("m"), py::arg("params"));

  mod.def(
      "default_axes",
      [](const std::string& family, const PyField& f, uint32_t m) {
        std::vector<std::pair<std::string, std::vector<uint64_t>>> out;
        for (const ParamAxis& ax : default_axes(family, f.ctx, m))
          out.emplace_back(ax.name, ax.values);
        return out;
      },
      py::arg("family"), py::arg("field"), py::arg("m"));

  auto make_plan = [](const std::string& family,
                      const std::vector<std::pair<uint64_t, uint32_t>>& fields,
                      const std::string& strategy, uint64_t samples, uint64_t seed,
                      const std::optional<std::vector<std::pair<std::string, std::vector<uint64_t>>>>&
                          axes) {
    SweepPlan plan;
    plan.family_id = family;
    plan.fields = fields;
    plan.strategy = strategy_from(strategy);
    plan.sample_count = samples;
    plan.sample_seed = seed;
    if (axes)
      for (const auto& [name, values] : *axes) plan.axes_override.push_back({name, values});
    return plan;
  };

  mod.def(
      "sweep_json",
      [make_plan](const std::string& family,
                  const std::vector<std::pair<uint64_t, uint32_t>>& fields,
                  const std::string& strategy, uint64_t samples, uint64_t seed,
                  const std::optional<std::vector<std::pair<std::string, std::vector<uint64_t>>>>&
                      axes) {
        return reports_to_json(run_sweep(make_plan(family, fields, strategy, samples, seed, axes)));
      },
      py::arg("family"), py::arg("fields"), py::arg("strategy") = "automatic",
      py::arg("samples") = 200, py::arg("seed") = 0, py::arg("axes") = py::none());

  mod.def(
      "sweep_csv",
      [make_plan](const std::string& family,
                  const std::vector<std::pair<uint64_t, uint32_t>>& fields,
                  const std::string& strategy, uint64_t samples, uint64_t seed,
                  const std::optional<std::vector<std::pair<std::string, std::vector<uint64_t>>>>&
                      axes) {
        return reports_to_csv(run_sweep(make_plan(family, fields, strategy, samples, seed, axes)));
      },
      py::arg("family"), py::arg("fields"), py::arg("strategy") = "automatic",
      py::arg("samples") = 200, py::arg("seed") = 0, py::arg("axes") = py::none());

  mod.def("sweep_draw", &sweep_draw, py::arg("seed"), py::arg("family"), py::arg("p"),
          py::arg("m"), py::arg("index"));
}
