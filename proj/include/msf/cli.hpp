// Command execution: validates a JobSpec, runs the corresponding pipeline,
// and emits a single JSON document. Exit code 0 on success (NonMinimal
// verdicts are data), 1 on input errors, 2 on internal invariant failures.
#pragma once

#include "msf/cache.hpp"

namespace msf {

inline constexpr const char* kToolVersion = "0.1.0";

struct JobSpec {
  std::string command;  // space | eigensystems | minimality | qexp | verify-lemma
  int64_t level = 1;
  int weight = 2;
  int64_t ell = 5;
  std::string character = "trivial";
  int64_t bound = 0;     // 0: command default
  int precision = 0;     // 0: command default
  int max_degree = 8;
  bool experimental_small_ell = false;
  bool full_gamma1 = false;
  std::string cache_dir = Cache::default_dir();
  bool no_cache = false;
  int64_t lemma_p = 2;
  int lemma_r = 1;
};

struct RunResult {
  int exit_code = 0;
  Json document;
};

namespace detail {

inline Json job_parameters(const JobSpec& job) {
  Json p{{"command", job.command}, {"level", job.level},   {"weight", job.weight},
         {"ell", job.ell},         {"character", job.character}};
  if (job.bound) p["bound"] = job.bound;
  if (job.precision) p["precision"] = job.precision;
  p["max_degree"] = job.max_degree;
  if (job.experimental_small_ell) p["experimental_small_ell"] = true;
  if (job.full_gamma1) p["full_gamma1"] = true;
  if (job.command == "verify-lemma") {
    p["p"] = job.lemma_p;
    p["r"] = job.lemma_r;
  }
  return p;
}

inline Json wrap(const JobSpec& job, Json result, const std::vector<Caveat>& caveats) {
  Json cv = Json::array();
  for (auto& c : caveats) cv.push_back(to_json(c));
  return Json{{"meta", Json{{"version", kToolVersion},
                            {"format_version", kCacheFormatVersion},
                            {"parameters", job_parameters(job)}}},
              {"result", std::move(result)},
              {"caveats", std::move(cv)}};
}

inline void validate(const JobSpec& job) {
  if (!is_prime(job.ell)) throw InputError("not prime");
  if (job.level < 1) throw InputError("level must be positive");
  if (job.level % job.ell == 0) throw InputError("ell divides level");
  if (job.weight < 1) throw InputError("weight must be positive");
  if (job.command == "minimality" && job.weight > job.ell + 1)
    throw InputError("minimality requires 1 <= k <= ell+1");
}

inline Json space_summary(const ModSymSpace& S) {
  Json cv = Json::array();
  for (auto& c : S.caveats) cv.push_back(to_json(c));
  return Json{{"level", S.level},
              {"weight", S.weight},
              {"ell", S.field->ell},
              {"character", S.eps.label()},
              {"zero", S.zero_space},
              {"presentation_dim", S.dim},
              {"cuspidal_dim", S.cuspidal.dim()},
              {"num_points", S.num_points},
              {"caveats", std::move(cv)}};
}

}  // namespace detail

inline RunResult run(const JobSpec& job) {
  RunResult res;
  std::vector<Caveat> caveats;
  try {
    detail::validate(job);
    Cache cache(job.no_cache ? "" : job.cache_dir);

    if (job.command == "verify-lemma") {
      bool ok = verify_sl2_generation(job.lemma_p, job.lemma_r);
      double frac = sl2_printed_identity_match(job.lemma_p, job.lemma_r);
      res.document = detail::wrap(job,
                                  Json{{"lemma", "sl2-generation"},
                                       {"p", job.lemma_p},
                                       {"r", job.lemma_r},
                                       {"ok", ok},
                                       {"printed_identity_match", frac}},
                                  caveats);
      return res;
    }

    BuildOptions opts;
    opts.experimental_small_ell = job.experimental_small_ell;
    DirichletCharacter eps =
        DirichletCharacter::parse_label(job.character, job.level, job.ell);
    auto build = [&]() { return build_space(job.level, job.weight, eps, job.ell, opts); };

    if (job.command == "space") {
      CacheKey key{job.level, job.weight, job.ell, job.character, "space", ""};
      Json result = cache.get_or_compute(
          key, [&]() { return detail::space_summary(build()); }, &caveats);
      res.document = detail::wrap(job, std::move(result), caveats);
      return res;
    }

    ModSymSpace S = build();
    for (auto& c : S.caveats) caveats.push_back(c);

    if (job.command == "eigensystems") {
      int64_t bound = job.bound ? job.bound
                                : sturm_bound(job.level, job.weight, GroupKind::Gamma0) + 5;
      HeckeDual dual(S, bound);
      auto systems = enumerate_systems(S, dual, std::min<int64_t>(bound, dual.index_bound()),
                                       job.max_degree, &caveats);
      Json arr = Json::array();
      for (auto& sys : systems) arr.push_back(to_json(sys));
      res.document = detail::wrap(
          job, Json{{"count", systems.size()}, {"systems", std::move(arr)}}, caveats);
      return res;
    }

    if (job.command == "qexp") {
      int prec = job.precision
                     ? job.precision
                     : static_cast<int>(sturm_bound(job.level, job.weight, GroupKind::Gamma0)) + 5;
      auto basis = qexp_basis(S, prec);
      Json arr = Json::array();
      for (auto& q : basis) arr.push_back(to_json(q));
      res.document = detail::wrap(
          job, Json{{"dimension", basis.size()}, {"basis", std::move(arr)}}, caveats);
      return res;
    }

    if (job.command == "minimality") {
      CacheKey key{job.level, job.weight, job.ell, job.character, "minimality",
                   "deg" + std::to_string(job.max_degree)};
      Json result = cache.get_or_compute(
          key,
          [&]() {
            int64_t bound = job.bound
                                ? job.bound
                                : sturm_bound(job.level, job.weight, GroupKind::Gamma0) + 5;
            HeckeDual dual(S, bound);
            auto systems = enumerate_systems(
                S, dual, std::min<int64_t>(dual.index_bound(), std::max<int64_t>(bound, 2)),
                job.max_degree, &caveats);
            Json reports = Json::array();
            for (auto& sys : systems) {
              MinimalityReport rep = minimality_report(S, dual, sys, job.max_degree);
              reports.push_back(to_json(rep));
            }
            Json result{{"count", systems.size()},
                        {"reports", std::move(reports)},
                        {"bound_policy",
                         Json{{"intersection", "primes up to sturm(n*r, k)"},
                              {"stabilization_window", 5},
                              {"certificate_precision", "sturm(n, k) + 5"}}}};
            if (job.full_gamma1) {
              // comparison run: T_p-conditions across all character blocks
              Json blocks = Json::array();
              for (auto& orb : character_orbits(job.level, job.ell)) {
                ModSymSpace Sx = build_space(job.level, job.weight, orb.rep, job.ell, opts);
                blocks.push_back(Json{{"character", orb.rep.label()},
                                      {"orbit_size", orb.orbit_size},
                                      {"cuspidal_dim", Sx.cuspidal.dim()}});
              }
              result["full_gamma1_blocks"] = std::move(blocks);
            }
            return result;
          },
          &caveats);
      res.document = detail::wrap(job, std::move(result), caveats);
      return res;
    }

    throw InputError("unknown command: " + job.command);
  } catch (const InputError& e) {
    res.exit_code = 1;
    res.document = Json{{"error", Json{{"code", "input"}, {"message", e.what()}}}};
  } catch (const InternalError& e) {
    res.exit_code = 2;
    res.document = Json{{"error", Json{{"code", "internal"}, {"message", e.what()}}}};
  }
  return res;
}

}  // namespace msf
