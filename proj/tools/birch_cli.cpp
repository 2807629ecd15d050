#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "birch/cli.hpp"

int main(int argc, char** argv) {
  birch::JobSpec job;
  CLI::App app{"Solve systems of odd-degree forms over Q, R and R(t1..tp) with exact certificates."};
  app.require_subcommand(1);

  std::string tol = "1/1000000000", height = "16";
  std::optional<std::string> avoid, threshold;
  auto common = [&](CLI::App* sub, bool with_inputs = true) {
    if (with_inputs) sub->add_option("inputs", job.inputs, "equations (separated by ';') or files")->required();
    sub->add_option("--field", job.field, "Q, R, R(t) or R(t1..tp)")->capture_default_str();
    sub->add_option("--seed", job.budget.seed, "random seed")->capture_default_str();
    sub->add_option("--height-bound", height, "height bound for exhaustive searches")->capture_default_str();
    sub->add_option("--restarts", job.budget.restarts, "restart budget")->capture_default_str();
    sub->add_option("--tol", tol, "residual tolerance for enclosed solutions")->capture_default_str();
    sub->add_option("--out", job.output, "write the certificate to this file");
    sub->add_option("--format", job.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  };
  auto* solve = app.add_subcommand("solve", "find a nonzero common zero");
  common(solve);
  solve->add_option("--avoid", avoid, "polynomial that must not vanish at the point");
  solve->add_option("--threshold", threshold, "regularize first with this strength threshold (integer or expression in d, r)");
  solve->add_option("--ell", job.ell, "block size of orthogonal subspaces")->capture_default_str();
  solve->add_flag("--affine", job.affine, "solve f = c by homogenizing with a fresh variable");
  auto* sample = app.add_subcommand("sample", "sample points of the rational parametrization");
  common(sample);
  sample->add_option("--count", job.count, "number of points")->capture_default_str();
  sample->add_option("--avoid", avoid, "polynomial that must not vanish at the points");
  sample->add_option("--ell", job.ell, "block size of orthogonal subspaces")->capture_default_str();
  auto* strength = app.add_subcommand("strength", "bounds on the collective strength");
  common(strength);
  auto* reg = app.add_subcommand("regularize", "replace low-strength combinations by their odd factors");
  common(reg);
  reg->add_option("--threshold", threshold, "strength threshold (integer or expression in d, r)")->required();
  auto* orth = app.add_subcommand("orthogonalize", "mutually orthogonal vectors or subspaces");
  common(orth);
  orth->add_option("--blocks", job.blocks, "number of vectors (ell = 1) or subspaces besides the last")->capture_default_str();
  orth->add_option("--ell", job.ell, "subspace dimension")->capture_default_str();
  orth->add_option("--avoid", avoid, "polynomial that must not vanish on the last subspace");
  auto* diag = app.add_subcommand("diagonal-solve", "nonzero zero of a diagonal equation");
  common(diag);
  diag->add_flag("--affine", job.affine, "solve sum a_i x_i^d = c");
  auto* verify = app.add_subcommand("verify", "re-check a certificate file");
  verify->add_option("certificate", job.inputs, "certificate file")->required()->expected(1);

  CLI11_PARSE(app, argc, argv);
  job.command = app.get_subcommands().front()->get_name();
  job.avoid = avoid;
  job.threshold = threshold;
  try {
    job.tol = birch::Rational(tol);
    job.tol.canonicalize();
    job.budget.height_bound = birch::Integer(height);
  } catch (const std::exception&) {
    std::cerr << "error: --tol and --height-bound take rational and integer values\n";
    return 1;
  }
  birch::RunResult res = birch::run(job);
  if (!res.message.empty()) std::cerr << res.message << "\n";
  if (res.exit_code == 0 && !job.output.empty()) {
    std::ofstream out(job.output);
    out << res.certificate;
    if (!out) {
      std::cerr << "error: cannot write " << job.output << "\n";
      return 1;
    }
  }
  std::cout << res.output;
  return res.exit_code;
}
