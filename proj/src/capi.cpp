// SPDX-License-Identifier: Apache-2.0

// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include "nearfocus.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "errors.hpp"
#include "channel.hpp"
#include "geometry.hpp"
#include "harness.hpp"
#include "scenario.hpp"

struct nf_scenario {
  nearfocus::Figure figure = nearfocus::Figure::kRun;
  nearfocus::ScenarioConfig config;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Maps the library's exception taxonomy onto the C status codes. Unknown
// exceptions count as numeric failures, never as silent success.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return NF_OK;
  } catch (const nearfocus::ConfigError& e) {
    set_error(e.what());
    return NF_ERR_CONFIG;
  } catch (const nearfocus::NumericError& e) {
    set_error(e.what());
    return NF_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return NF_ERR_NUMERIC;
  } catch (...) {
    set_error("unknown error");
    return NF_ERR_NUMERIC;
  }
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(::operator new(text.size() + 1, std::nothrow));
  if (out == nullptr) {
    set_error("out of memory");
    return nullptr;
  }
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* nf_version(void) { return "0.1.0"; }

const char* nf_last_error(void) { return g_last_error.c_str(); }

nf_scenario* nf_scenario_create(const char* figure) {
  if (figure == nullptr) {
    set_error("figure name is NULL");
    return nullptr;
  }
  nf_scenario* scenario = nullptr;
  const int rc = guarded([&] {
    const auto id = nearfocus::figure_from_name(figure);
    scenario = new nf_scenario{id, nearfocus::figure_preset(id)};
  });
  return rc == NF_OK ? scenario : nullptr;
}

nf_scenario* nf_scenario_clone(const nf_scenario* scenario) {
  if (scenario == nullptr) {
    set_error("scenario is NULL");
    return nullptr;
  }
  nf_scenario* copy = nullptr;
  const int rc = guarded([&] { copy = new nf_scenario(*scenario); });
  return rc == NF_OK ? copy : nullptr;
}

void nf_scenario_free(nf_scenario* scenario) { delete scenario; }

int nf_scenario_load_json(nf_scenario* scenario, const char* json_text) {
  if (scenario == nullptr || json_text == nullptr) {
    set_error("scenario or JSON text is NULL");
    return NF_ERR_CONFIG;
  }
  return guarded([&] {
    nearfocus::ScenarioConfig staged = scenario->config;
    nearfocus::apply_json_overrides(staged, json_text);
    scenario->config = staged;
  });
}

int nf_scenario_load_json_file(nf_scenario* scenario, const char* path) {
  if (scenario == nullptr || path == nullptr) {
    set_error("scenario or path is NULL");
    return NF_ERR_CONFIG;
  }
  return guarded([&] {
    nearfocus::ScenarioConfig staged = scenario->config;
    nearfocus::apply_json_file(staged, path);
    scenario->config = staged;
  });
}

int nf_scenario_set_seed(nf_scenario* scenario, uint64_t seed) {
  if (scenario == nullptr) {
    set_error("scenario is NULL");
    return NF_ERR_CONFIG;
  }
  scenario->config.seed = seed;
  return NF_OK;
}

int nf_scenario_set_trials(nf_scenario* scenario, long long trials) {
  if (scenario == nullptr) {
    set_error("scenario is NULL");
    return NF_ERR_CONFIG;
  }
  if (trials < 1) {
    set_error("trials must be at least 1");
    return NF_ERR_CONFIG;
  }
  scenario->config.trials = trials;
  return NF_OK;
}

int nf_scenario_set_threads(nf_scenario* scenario, int threads) {
  if (scenario == nullptr) {
    set_error("scenario is NULL");
    return NF_ERR_CONFIG;
  }
  if (threads < 0) {
    set_error("threads must be non-negative");
    return NF_ERR_CONFIG;
  }
  scenario->config.threads = threads;
  return NF_OK;
}

int nf_scenario_set_paper_scale(nf_scenario* scenario, int enabled) {
  if (scenario == nullptr) {
    set_error("scenario is NULL");
    return NF_ERR_CONFIG;
  }
  scenario->config.paper_scale = enabled != 0;
  return NF_OK;
}

char* nf_scenario_resolved_json(const nf_scenario* scenario) {
  if (scenario == nullptr) {
    set_error("scenario is NULL");
    return nullptr;
  }
  std::string text;
  const int rc = guarded([&] {
    const auto resolved = nearfocus::resolve(scenario->config, scenario->figure);
    text = nearfocus::resolved_config_json(resolved);
  });
  return rc == NF_OK ? copy_string(text) : nullptr;
}

void nf_string_free(char* text) { ::operator delete(text); }

int nf_run(const nf_scenario* scenario, const char* out_dir) {
  if (scenario == nullptr || out_dir == nullptr) {
    set_error("scenario or output directory is NULL");
    return NF_ERR_CONFIG;
  }
  return guarded([&] {
    const auto resolved = nearfocus::resolve(scenario->config, scenario->figure);
    nearfocus::run_figure(resolved, out_dir);
  });
}

double nf_fraunhofer_distance_m(int n_antennas, double spacing_m, double fc_hz) {
  double value = std::numeric_limits<double>::quiet_NaN();
  guarded([&] {
    if (n_antennas < 1 || !(spacing_m > 0.0) || !(fc_hz > 0.0)) {
      throw nearfocus::ConfigError("fraunhofer distance requires positive arguments");
    }
    value = nearfocus::fraunhofer_distance(nearfocus::UlaGeometry{n_antennas, spacing_m},
                                           nearfocus::CarrierConfig{fc_hz});
  });
  return value;
}

double nf_reflection_coefficient_db(double fc_hz) {
  return nearfocus::reflection_coefficient_db(fc_hz);
}

}  // extern "C"
