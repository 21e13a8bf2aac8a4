#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "localrep/json_io.hpp"

namespace fam = localrep::families;
namespace wst = localrep::weierstrass;
using localrep::Integer;

namespace {

// 0 ok, 2 input error, 3 table/oracle discrepancy, 4 incomplete factorization
constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kDiscrepancy = 3;
constexpr int kIncomplete = 4;

Integer parse_integer(const std::string& s) {
  try {
    return Integer(s);
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError("not an integer: " + s);
  }
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload << "\n";
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + out_path);
  os << payload << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{
      "Exact local reduction data and GL(2,Q_p) representation descriptors "
      "for the odd-torsion families of rational elliptic curves"};
  app.require_subcommand(1);

  // classify
  auto* classify_cmd = app.add_subcommand(
      "classify", "Classify one family member at every bad prime");
  std::string torsion_str, a_str, b_str = "0", format = "json", out_path;
  classify_cmd->add_option("--torsion", torsion_str, "family tag")->required();
  classify_cmd->add_option("--a", a_str, "parameter a")->required();
  classify_cmd->add_option("--b", b_str, "parameter b (ignored for C3_0)");
  classify_cmd->add_option("--format", format)
      ->check(CLI::IsMember({"json", "text"}));
  classify_cmd->add_option("--out", out_path, "write output to a file");

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "Sweep coprime parameters and compare tables vs the oracle");
  long bound = 0;
  unsigned jobs = 1;
  std::vector<std::string> verify_torsion;
  std::string verify_out;
  verify_cmd->add_option("--bound", bound, "max |a|,|b|")
      ->required()
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--torsion", verify_torsion,
                         "restrict to these families (repeatable)");
  verify_cmd->add_option("--jobs", jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  std::string verify_format = "json";
  verify_cmd->add_option("--format", verify_format)
      ->check(CLI::IsMember({"json", "text"}));
  verify_cmd->add_option("--out", verify_out, "write the report to a file");

  // tate
  auto* tate_cmd = app.add_subcommand(
      "tate", "Run the reduction-data oracle on an explicit integral model");
  std::string s_a1 = "0", s_a2 = "0", s_a3 = "0", s_a4 = "0", s_a6 = "0",
              s_p, tate_out;
  tate_cmd->add_option("--a1", s_a1);
  tate_cmd->add_option("--a2", s_a2);
  tate_cmd->add_option("--a3", s_a3);
  tate_cmd->add_option("--a4", s_a4);
  tate_cmd->add_option("--a6", s_a6);
  tate_cmd->add_option("--p", s_p, "single prime (default: all bad primes)");
  tate_cmd->add_option("--out", tate_out, "write output to a file");

  // rules
  auto* rules_cmd = app.add_subcommand(
      "rules", "Print the classification rule inventory");
  std::string rules_format = "markdown", rules_out;
  rules_cmd->add_option("--format", rules_format)
      ->check(CLI::IsMember({"markdown", "json"}));
  rules_cmd->add_option("--out", rules_out, "write output to a file");

  CLI11_PARSE(app, argc, argv);

  if (classify_cmd->parsed()) {
    auto T = fam::torsion_from_string(torsion_str);
    if (!T) {
      std::cerr << "unknown torsion tag: " << torsion_str << "\n";
      return kInputError;
    }
    fam::FamilyParams params =
        fam::validate_params(*T, parse_integer(a_str), parse_integer(b_str));
    emit(format == "json"
             ? localrep::json_io::dump(localrep::json_io::classify_json(params))
             : localrep::json_io::classify_text(params),
         out_path);
    return kOk;
  }

  if (verify_cmd->parsed()) {
    std::vector<fam::Torsion> which;
    if (verify_torsion.empty()) {
      which = fam::all_torsions();
    } else {
      for (const auto& s : verify_torsion) {
        auto T = fam::torsion_from_string(s);
        if (!T) {
          std::cerr << "unknown torsion tag: " << s << "\n";
          return kInputError;
        }
        which.push_back(*T);
      }
    }
    localrep::sweep::SweepReport report =
        localrep::sweep::run_sweep(which, bound, jobs);
    emit(verify_format == "json"
             ? localrep::json_io::dump(
                   localrep::json_io::sweep_report_json(report))
             : localrep::json_io::sweep_report_text(report),
         verify_out);
    if (!report.discrepancies.empty()) return kDiscrepancy;
    if (!report.incomplete.empty()) return kIncomplete;
    return kOk;
  }

  if (tate_cmd->parsed()) {
    wst::Model m{localrep::Rational(parse_integer(s_a1)),
                 localrep::Rational(parse_integer(s_a2)),
                 localrep::Rational(parse_integer(s_a3)),
                 localrep::Rational(parse_integer(s_a4)),
                 localrep::Rational(parse_integer(s_a6))};
    if (wst::invariants(m).disc == 0) {
      std::cerr << "singular model: Delta = 0\n";
      return kInputError;
    }
    std::optional<Integer> p;
    if (!s_p.empty()) {
      p = parse_integer(s_p);
      if (!localrep::nt::is_prime(*p)) {
        std::cerr << "not a prime: " << s_p << "\n";
        return kInputError;
      }
    }
    emit(localrep::json_io::dump(localrep::json_io::tate_json(m, p)), tate_out);
    return kOk;
  }

  if (rules_cmd->parsed()) {
    if (rules_format == "markdown") {
      emit(localrep::classify::traceability_markdown(), rules_out);
    } else {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : localrep::classify::rule_inventory()) {
        j.push_back({{"id", r.id},
                     {"table", r.table},
                     {"family", r.family},
                     {"primes", r.primes},
                     {"condition", r.condition},
                     {"output", r.output},
                     {"kodaira", r.kodaira}});
      }
      emit(localrep::json_io::dump(j), rules_out);
    }
    return kOk;
  }
  return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const localrep::nt::IncompleteFactorizationError& e) {
    std::cerr << e.what() << "\n";
    return kIncomplete;
  } catch (const localrep::classify::ClassificationError& e) {
    std::cerr << e.what() << "\n";
    return kDiscrepancy;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
