#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "torusforge/canonical.hpp"
#include "torusforge/error.hpp"
#include "torusforge/families/families.hpp"
#include "torusforge/pipeline/commands.hpp"
#include "torusforge/pipeline/config.hpp"
#include "torusforge/pipeline/parse.hpp"

using namespace torusforge;
using namespace torusforge::pipeline;

namespace {

std::optional<families::FamilySpec> read_spec(const std::optional<std::string>& spec_path) {
  if (!spec_path) return std::nullopt;
  std::ifstream in(*spec_path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + *spec_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("spec is not JSON: ") + e.what());
  }
  // Accept a bare FamilySpec or the output of `generate --json`.
  if (j.contains("spec")) j = j["spec"];
  return families::FamilySpec::from_json(j);
}

exactalg::RatPolynomial polynomial_from(const std::optional<std::string>& expr, const std::optional<std::string>& spec_path) {
  if (expr && spec_path) throw Error(ErrorKind::InvalidInput, "give either a polynomial or --spec, not both");
  if (auto spec = read_spec(spec_path)) return spec->polynomial();
  if (!expr) throw Error(ErrorKind::InvalidInput, "missing polynomial");
  return parse_polynomial(*expr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torus-forge: special complex tori from number fields"};
  app.require_subcommand(1);

  std::optional<long> precision;
  std::optional<std::size_t> prime_budget;
  std::optional<std::string> store;
  std::optional<std::string> lll_delta;
  std::optional<unsigned long> embedding;
  std::optional<std::uint64_t> seed;
  bool json = false;
  app.add_option("--precision", precision, "working precision in bits (128..4096, default 256)");
  app.add_option("--prime-budget", prime_budget, "good primes examined per Frobenius scan (default 100)");
  app.add_option("--store", store, "certificate store directory");
  app.add_option("--lll-delta", lll_delta, "LLL parameter as a rational, default 99/100");
  app.add_option("--embedding", embedding, "bitmask choosing conjugate roots (default 0)");
  app.add_option("--seed", seed, "root-finder jitter seed (outputs do not depend on it)");
  app.add_flag("--json", json, "print canonical JSON");

  auto* gen = app.add_subcommand("generate", "build a family polynomial");
  std::string gen_kind;
  long gen_g = 2;
  std::optional<std::string> gen_quadruple;
  bool gen_auto = false;
  gen->add_option("kind", gen_kind, "selmer | exp | quadruple")->required();
  gen->add_option("--g", gen_g, "genus")->required();
  gen->add_option("--quadruple", gen_quadruple, "l,p,b,c");
  gen->add_flag("--auto", gen_auto, "first enumerated quadruple (default when --quadruple is absent)");

  auto* cert = app.add_subcommand("certify", "certify the special-torus hypotheses");
  std::optional<std::string> cert_poly, cert_spec;
  cert->add_option("polynomial", cert_poly, "e.g. \"x^4+x+1\"");
  cert->add_option("--spec", cert_spec, "FamilySpec JSON file");

  auto* ver = app.add_subcommand("verify-torus", "compute End, NS and Hom(T, T^) ranks");
  std::optional<std::string> ver_poly, ver_spec;
  std::string fixture;
  bool force = false;
  ver->add_option("polynomial", ver_poly, "e.g. \"x^4+x+1\"");
  ver->add_option("--spec", ver_spec, "FamilySpec JSON file");
  ver->add_option("--fixture", fixture, "test fixture: square");
  ver->add_flag("--force", force, "run without a stored certificate");

  auto* fam = app.add_subcommand("family", "build mutually non-isogenous special tori");
  long fam_g = 2, fam_count = 1;
  fam->add_option("--g", fam_g, "genus")->required();
  fam->add_option("--count", fam_count, "number of tori")->required();

  auto* show = app.add_subcommand("show", "print a stored object or the index entries of a polynomial");
  std::string show_key;
  show->add_option("key", show_key, "object hash or polynomial")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::kInvalidInput;
  }

  CommandResult result;
  try {
    RunConfig config = load_config();
    if (precision) config.precision = *precision;
    if (prime_budget) config.prime_budget = *prime_budget;
    if (store) config.store_path = *store;
    if (lll_delta) config.lll_delta = exactalg::parse_rational(*lll_delta);
    if (embedding) config.embedding_bitmask = *embedding;
    if (seed) config.seed = *seed;
    config.validate();

    if (*gen) {
      GenerateRequest req{gen_kind, gen_g, gen_quadruple};
      result = cmd_generate(req, config);
    } else if (*cert) {
      auto spec = cert_poly ? std::nullopt : read_spec(cert_spec);
      if (spec && spec->quadruple)
        result = cmd_certify(*spec->quadruple, config);
      else
        result = cmd_certify(polynomial_from(cert_poly, cert_spec), config);
    } else if (*ver) {
      VerifyRequest req;
      req.fixture = fixture;
      req.force = force;
      if (fixture.empty()) req.polynomial = polynomial_from(ver_poly, ver_spec);
      result = cmd_verify_torus(req, config);
    } else if (*fam) {
      result = cmd_family(fam_g, fam_count, config);
    } else if (*show) {
      result = cmd_show(show_key, config);
    }
  } catch (const Error& e) {
    result = error_result(e);
  } catch (const std::exception& e) {
    result = error_result(Error(ErrorKind::Internal, e.what()));
  }

  if (json) {
    std::cout << canonical_dump(result.json) << "\n";
  } else {
    (result.exit_code == exit_code::kInvalidInput || result.json.contains("error") ? std::cerr : std::cout) << result.text;
  }
  return result.exit_code;
}
