#include "json.hpp"
#include "linpat/amplify.hpp"
#include "linpat/errors.hpp"

namespace linpat {

std::string certificate_to_json(const UncommonnessCertificate& c) {
  nlohmann::json j;
  j["kind"] = "uncommonness";
  j["p"] = c.p;
  j["k"] = c.k;
  j["seed"] = c.seed;
  j["system"] = c.system_rows;
  j["subsystem"] = c.subsystem_rows;
  j["embedding"] = c.embedding;
  j["classes"] = nlohmann::json::array();
  for (const ClassRecord& r : c.classes) {
    j["classes"].push_back({{"columns", r.columns},
                            {"equations", r.equations},
                            {"multiplicity", r.multiplicity},
                            {"size", r.size},
                            {"degrees_of_freedom", r.degrees_of_freedom},
                            {"exponent", r.exponent},
                            {"free", r.free},
                            {"minimal", r.minimal},
                            {"density_f0", {r.density_f0 - r.error_f0, r.density_f0, r.density_f0 + r.error_f0}},
                            {"error_f0", r.error_f0},
                            {"density_f1", {r.density_f1 - r.error_f1, r.density_f1, r.density_f1 + r.error_f1}},
                            {"error_f1", r.error_f1}});
  }
  j["dominant"] = c.dominant;
  j["separation"] = {{"n0", c.n0}, {"iteration", c.separation_iteration}, {"f0", c.f0}};
  j["witness"] = nlohmann::json::parse(witness_to_json(c.witness));
  j["f1"] = c.f1;
  j["A"] = c.A;
  j["B"] = c.B;
  j["lead_upper"] = c.lead_upper;
  j["tail_bound"] = c.tail_bound;
  j["defect_upper"] = c.defect_upper;
  j["inequality"] = c.inequality();
  j["defect_estimate"] = c.defect_estimate;
  j["direct_check"] = {{"performed", c.direct_checked}, {"defect", c.direct_defect}, {"note", c.direct_note}};
  return j.dump(2);
}

UncommonnessCertificate certificate_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("kind", std::string{}) != "uncommonness") throw UsageError("not an uncommonness certificate");
    UncommonnessCertificate c;
    c.p = j.at("p").get<int>();
    c.k = j.at("k").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.system_rows = j.at("system").get<std::vector<std::vector<std::int64_t>>>();
    c.subsystem_rows = j.at("subsystem").get<std::vector<std::vector<std::int64_t>>>();
    c.embedding = j.at("embedding").get<std::vector<std::size_t>>();
    for (const auto& r : j.at("classes")) {
      ClassRecord rec;
      rec.columns = r.at("columns").get<std::vector<std::size_t>>();
      rec.equations = r.at("equations").get<std::vector<std::vector<std::int64_t>>>();
      rec.multiplicity = r.at("multiplicity").get<std::size_t>();
      rec.size = r.at("size").get<std::size_t>();
      rec.degrees_of_freedom = r.at("degrees_of_freedom").get<std::size_t>();
      rec.exponent = r.at("exponent").get<std::size_t>();
      rec.free = r.at("free").get<bool>();
      rec.minimal = r.at("minimal").get<bool>();
      rec.density_f0 = r.at("density_f0").at(1).get<double>();
      rec.error_f0 = r.at("error_f0").get<double>();
      rec.density_f1 = r.at("density_f1").at(1).get<double>();
      rec.error_f1 = r.at("error_f1").get<double>();
      c.classes.push_back(std::move(rec));
    }
    c.dominant = j.at("dominant").get<std::size_t>();
    c.n0 = j.at("separation").at("n0").get<int>();
    c.separation_iteration = j.at("separation").at("iteration").get<std::uint64_t>();
    c.f0 = j.at("separation").at("f0").get<std::vector<double>>();
    c.witness = witness_from_json(j.at("witness").dump());
    c.f1 = j.at("f1").get<std::vector<double>>();
    c.A = j.at("A").get<unsigned>();
    c.B = j.at("B").get<unsigned>();
    c.lead_upper = j.at("lead_upper").get<std::string>();
    c.tail_bound = j.at("tail_bound").get<std::string>();
    c.defect_upper = j.at("defect_upper").get<std::string>();
    c.defect_estimate = j.at("defect_estimate").get<double>();
    c.direct_checked = j.at("direct_check").at("performed").get<bool>();
    c.direct_defect = j.at("direct_check").at("defect").get<double>();
    c.direct_note = j.at("direct_check").at("note").get<std::string>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed uncommonness certificate: ") + e.what());
  }
}

}  // namespace linpat
