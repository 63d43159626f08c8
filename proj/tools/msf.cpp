// msf: mod-ell cuspform spaces, Hecke eigensystems, and minimality
// certificates from the command line. Emits one JSON document per run.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "msf/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"msf: mod-ell modular symbols, eigensystems, and minimality certificates"};
  app.require_subcommand(1);

  msf::JobSpec job;
  std::string out_path;

  auto add_common = [&](CLI::App* cmd, bool needs_space) {
    if (needs_space) {
      cmd->add_option("--level,-n", job.level, "level n")->required();
      cmd->add_option("--weight,-k", job.weight, "weight k (>= 2)");
      cmd->add_option("--ell,-l", job.ell, "prime ell")->required();
      cmd->add_option("--character,-c", job.character,
                      "character label: 'trivial' or 'n.d:e1,e2,...'");
      cmd->add_option("--bound", job.bound, "prime cutoff override");
      cmd->add_option("--precision", job.precision, "q-expansion precision override");
      cmd->add_option("--max-degree", job.max_degree,
                      "largest eigenvalue field degree explored");
      cmd->add_flag("--experimental-small-ell", job.experimental_small_ell,
                    "allow ell in {2,3}");
      cmd->add_option("--cache-dir", job.cache_dir,
                      "cache directory (default: $MSF_CACHE_DIR)");
      cmd->add_flag("--no-cache", job.no_cache, "disable the on-disk cache");
    }
    cmd->add_option("--out,-o", out_path, "write the JSON document to a file");
  };

  auto* space = app.add_subcommand("space", "build a space and report its dimensions");
  add_common(space, true);
  auto* eig = app.add_subcommand("eigensystems", "enumerate mod-ell eigenvalue systems");
  add_common(eig, true);
  auto* minim = app.add_subcommand("minimality",
                                   "joint-kernel minimality reports with certificates");
  add_common(minim, true);
  minim->add_flag("--full-gamma1", job.full_gamma1,
                  "also report all character blocks of the full Gamma1 space");
  auto* qexp = app.add_subcommand("qexp", "echelonized q-expansion basis");
  add_common(qexp, true);
  auto* lemma = app.add_subcommand("verify-lemma",
                                   "brute-force closure check of the SL2 generation lemma");
  lemma->add_option("--p", job.lemma_p, "prime p")->required();
  lemma->add_option("--r", job.lemma_r, "exponent r")->required();
  add_common(lemma, false);

  CLI11_PARSE(app, argc, argv);

  for (auto* cmd : {space, eig, minim, qexp, lemma})
    if (cmd->parsed()) job.command = cmd->get_name();

  msf::RunResult res = msf::run(job);
  std::string text = res.document.dump(2);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << text << "\n";
  } else {
    std::cout << text << "\n";
  }
  return res.exit_code;
}
