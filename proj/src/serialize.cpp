#include "g2r/serialize.hpp"

#include <cmath>
#include <string>

namespace g2r {

using nlohmann::json;

namespace {

json labels_to_json(const std::vector<Label>& v) { return json(v); }

std::vector<Label> labels_from_json(const json& j) { return j.get<std::vector<Label>>(); }

}  // namespace

json hypothesis_to_json(const Hypothesis& h) {
  json j;
  j["arity"] = h.arity();
  if (h.negated()) j["negate"] = true;
  const Hypothesis::Form& form = h.form();
  if (const auto* t = std::get_if<LookupTableH>(&form)) {
    j["form"] = "lookup";
    j["labels"] = labels_to_json(t->labels);
  } else if (const auto* t = std::get_if<ThresholdH>(&form)) {
    if (t->below == t->above) {
      j["form"] = "constant";
      j["value"] = t->below;
    } else {
      if (!std::isfinite(t->cut)) {
        throw ValidationError("hypothesis_to_json: non-finite threshold cut");
      }
      j["form"] = "threshold";
      j["coord"] = t->coord;
      j["cut"] = t->cut;
      j["below"] = t->below;
      j["above"] = t->above;
    }
  } else if (const auto* l = std::get_if<LinearSoftmaxH>(&form)) {
    j["form"] = "linear_softmax";
    j["dims"] = l->dims;
    j["weights"] = l->weights;
    j["bias"] = l->bias;
  } else if (const auto* n = std::get_if<OneHiddenNetH>(&form)) {
    j["form"] = "one_hidden_net";
    j["dims"] = n->dims;
    j["hidden"] = n->hidden;
    j["w1"] = n->w1;
    j["b1"] = n->b1;
    j["w2"] = n->w2;
    j["b2"] = n->b2;
  }
  return j;
}

Hypothesis hypothesis_from_json(const json& j) {
  const std::string form = j.at("form").get<std::string>();
  const int arity = j.at("arity").get<int>();
  Hypothesis h;
  if (form == "lookup") {
    h = Hypothesis::lookup(arity, labels_from_json(j.at("labels")));
  } else if (form == "constant") {
    h = Hypothesis::constant(arity, j.at("value").get<Label>());
  } else if (form == "threshold") {
    h = Hypothesis::threshold(j.at("coord").get<std::size_t>(), j.at("cut").get<double>(),
                              j.at("below").get<Label>(), j.at("above").get<Label>(), arity);
  } else if (form == "linear_softmax") {
    h = Hypothesis::linear_softmax(j.at("dims").get<std::size_t>(), arity,
                                   j.at("weights").get<std::vector<double>>(),
                                   j.at("bias").get<std::vector<double>>());
  } else if (form == "one_hidden_net") {
    h = Hypothesis::one_hidden_net(
        j.at("dims").get<std::size_t>(), j.at("hidden").get<std::size_t>(), arity,
        j.at("w1").get<std::vector<double>>(), j.at("b1").get<std::vector<double>>(),
        j.at("w2").get<std::vector<double>>(), j.at("b2").get<std::vector<double>>());
  } else {
    throw ParseError("hypothesis_from_json: unknown form '" + form + "'");
  }
  if (j.value("negate", false)) h = h.complemented();
  return h;
}

json space_to_json(const HypothesisSpace& s) {
  json j;
  switch (s.kind()) {
    case HypothesisSpace::Kind::finite: {
      j["kind"] = "finite";
      json members = json::array();
      for (const Hypothesis& h : s.members()) members.push_back(hypothesis_to_json(h));
      j["members"] = std::move(members);
      break;
    }
    case HypothesisSpace::Kind::thresholds_1d:
      j["kind"] = "thresholds_1d";
      j["domain_size"] = s.domain_size();
      break;
    case HypothesisSpace::Kind::stumps_kd:
      j["kind"] = "stumps_kd";
      j["dims"] = s.dims();
      j["cuts"] = s.cuts();
      break;
    case HypothesisSpace::Kind::linear_softmax_family:
      j["kind"] = "linear_softmax_family";
      j["dims"] = s.dims();
      j["arity"] = s.arity();
      break;
    case HypothesisSpace::Kind::small_net_family:
      j["kind"] = "small_net_family";
      j["dims"] = s.dims();
      j["hidden"] = s.hidden();
      j["arity"] = s.arity();
      break;
  }
  return j;
}

HypothesisSpace space_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite") {
    std::vector<Hypothesis> members;
    for (const json& m : j.at("members")) members.push_back(hypothesis_from_json(m));
    return HypothesisSpace::finite(std::move(members));
  }
  if (kind == "thresholds_1d") {
    return HypothesisSpace::thresholds_1d(j.at("domain_size").get<std::size_t>());
  }
  if (kind == "stumps_kd") {
    return HypothesisSpace::stumps_kd(j.at("dims").get<std::size_t>(),
                                      j.at("cuts").get<std::vector<double>>());
  }
  if (kind == "linear_softmax_family") {
    return HypothesisSpace::linear_softmax_family(j.at("dims").get<std::size_t>(),
                                                  j.at("arity").get<int>());
  }
  if (kind == "small_net_family") {
    return HypothesisSpace::small_net_family(j.at("dims").get<std::size_t>(),
                                             j.at("hidden").get<std::size_t>(),
                                             j.at("arity").get<int>());
  }
  throw ParseError("space_from_json: unknown kind '" + kind + "'");
}

json instance_to_json(const exact::DiscreteInstance& inst) {
  json j;
  j["domain_size"] = inst.domain_size();
  j["arity"] = inst.f_r.arity();
  j["dist_r"] = inst.dist_r.masses();
  j["dist_g"] = inst.dist_g.masses();
  j["f_r"] = labels_to_json(inst.f_r.values());
  j["f_g"] = labels_to_json(inst.f_g.values());
  j["space"] = space_to_json(inst.space);
  return j;
}

exact::DiscreteInstance instance_from_json(const json& j) {
  const int arity = j.at("arity").get<int>();
  exact::DiscreteInstance inst{
      ProbTable(j.at("dist_r").get<std::vector<double>>()),
      ProbTable(j.at("dist_g").get<std::vector<double>>()),
      LabelingFunction::table(arity, labels_from_json(j.at("f_r"))),
      LabelingFunction::table(arity, labels_from_json(j.at("f_g"))),
      space_from_json(j.at("space"))};
  inst.validate();
  return inst;
}

json bound_report_to_json(const est::BoundReport& r) {
  json j;
  j["eps_test_g_h"] = r.eps_test_g_h;
  j["eps_test_r_h"] = r.eps_test_r_h;
  j["lambda_hat"] = r.lambda_hat;
  j["d_g2r_hat"] = r.d_g2r_hat;
  j["b_g2r_hat"] = r.b_g2r_hat;
  if (r.d_da_hat) j["d_da_hat"] = *r.d_da_hat;
  if (r.b_da_hat) j["b_da_hat"] = *r.b_da_hat;
  j["hoeffding_margin"] = r.hoeffding_margin;
  j["n"] = r.n;
  j["m"] = r.m;
  j["delta"] = r.delta;
  j["seed"] = r.seed;
  if (r.gamma) j["gamma"] = *r.gamma;
  if (r.rho) j["rho"] = *r.rho;
  return j;
}

est::BoundReport bound_report_from_json(const json& j) {
  est::BoundReport r;
  r.eps_test_g_h = j.at("eps_test_g_h").get<double>();
  r.eps_test_r_h = j.at("eps_test_r_h").get<double>();
  r.lambda_hat = j.at("lambda_hat").get<double>();
  r.d_g2r_hat = j.at("d_g2r_hat").get<double>();
  r.b_g2r_hat = j.at("b_g2r_hat").get<double>();
  if (j.contains("d_da_hat")) r.d_da_hat = j.at("d_da_hat").get<double>();
  if (j.contains("b_da_hat")) r.b_da_hat = j.at("b_da_hat").get<double>();
  r.hoeffding_margin = j.at("hoeffding_margin").get<double>();
  r.n = j.at("n").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.delta = j.at("delta").get<double>();
  r.seed = j.at("seed").get<Seed>();
  if (j.contains("gamma")) r.gamma = j.at("gamma").get<double>();
  if (j.contains("rho")) r.rho = j.at("rho").get<double>();
  return r;
}

}  // namespace g2r
