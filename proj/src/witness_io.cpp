#include "json.hpp"

#include "linpat/errors.hpp"
#include "linpat/witness.hpp"

namespace linpat {

std::string witness_to_json(const WitnessCertificate& cert) {
  nlohmann::json j;
  j["kind"] = "witness";
  j["system"] = cert.system_rows;
  j["p"] = cert.p;
  j["n"] = cert.n;
  j["method"] = to_string(cert.method);
  j["seed"] = cert.seed;
  j["iteration"] = cert.iteration;
  j["r0"] = cert.r0;
  j["s0"] = cert.s0;
  j["negated"] = cert.negated;
  j["scale"] = cert.scale;
  j["mean"] = cert.mean;
  j["sup_norm"] = cert.sup_norm;
  j["density_direct"] = cert.density_direct;
  j["density_fourier"] = cert.density_fourier;
  j["raw_density"] = cert.raw_density;
  j["threshold"] = cert.threshold;
  j["term_count"] = cert.term_count;
  j["values"] = cert.values;
  return j.dump(2);
}

WitnessCertificate witness_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("kind", std::string{}) != "witness") throw UsageError("not a witness certificate");
    WitnessCertificate c;
    c.system_rows = j.at("system").get<std::vector<std::vector<std::int64_t>>>();
    c.p = j.at("p").get<int>();
    c.n = j.at("n").get<int>();
    c.method = witness_method_from_string(j.at("method").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.iteration = j.at("iteration").get<std::uint64_t>();
    c.r0 = j.at("r0").get<Index>();
    c.s0 = j.at("s0").get<Index>();
    c.negated = j.at("negated").get<bool>();
    c.scale = j.at("scale").get<double>();
    c.mean = j.at("mean").get<double>();
    c.sup_norm = j.at("sup_norm").get<double>();
    c.density_direct = j.at("density_direct").get<double>();
    c.density_fourier = j.at("density_fourier").get<double>();
    c.raw_density = j.at("raw_density").get<double>();
    c.threshold = j.at("threshold").get<double>();
    c.term_count = j.at("term_count").get<std::uint64_t>();
    c.values = j.at("values").get<std::vector<double>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed witness certificate: ") + e.what());
  }
}

}  // namespace linpat
