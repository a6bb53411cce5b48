#include "berry_ring/berry_ring.h"

#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "berry_ring/adiabatic.hpp"
#include "berry_ring/config.hpp"
#include "berry_ring/error.hpp"
#include "berry_ring/evolution.hpp"
#include "berry_ring/resonator.hpp"
#include "berry_ring/scenario.hpp"
#include "berry_ring/zener.hpp"

namespace br = berry_ring;

struct br_ring {
  std::unique_ptr<br::RingPath> impl;
};

struct br_config {
  br::ConfigSource source;
  std::unique_ptr<br::RunConfig> impl;
};

namespace {

thread_local std::string last_error;

struct NullPointer {
  std::string what;
};

br_status status_of(br::ErrorCode code) { return static_cast<br_status>(static_cast<int>(code)); }

template <class F>
br_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return BR_OK;
  } catch (const NullPointer& e) {
    last_error = e.what;
    return BR_ERR_NULL_POINTER;
  } catch (const br::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BR_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return BR_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw NullPointer{std::string(what) + " is NULL"};
}

br_matrix2 to_c(const br::TransferMatrix& m) {
  return {{m.m11.real(), m.m11.imag()}, {m.m12.real(), m.m12.imag()}, {m.m21.real(), m.m21.imag()},
          {m.m22.real(), m.m22.imag()}};
}

br::TransferMatrix from_c(const br_matrix2& m) {
  return {{m.m11.re, m.m11.im}, {m.m12.re, m.m12.im}, {m.m21.re, m.m21.im}, {m.m22.re, m.m22.im}};
}

br::IntegrationConfig integration(int spu) {
  br::IntegrationConfig c;
  if (spu > 0) c.steps_per_unit_length = spu;
  return c;
}

br::ZenerMethod method_of(br_zener_method m) {
  switch (m) {
    case BR_ZENER_PERTURBATIVE: return br::ZenerMethod::perturbative_integral;
    case BR_ZENER_NUMERIC: return br::ZenerMethod::numeric_monodromy;
    case BR_ZENER_CLOSED_FORM: return br::ZenerMethod::closed_form;
  }
  throw br::Error(br::ErrorCode::invalid_argument, "unknown Zener method");
}

void reload(br_config* c) { c->impl = std::make_unique<br::RunConfig>(br::load_config(c->source)); }

}  // namespace

extern "C" {

const char* br_version(void) { return br::library_version; }

const char* br_status_string(br_status status) {
  switch (status) {
    case BR_OK: return "ok";
    case BR_ERR_NULL_POINTER: return "null pointer";
    case BR_ERR_INTERNAL: return "internal error";
    default: break;
  }
  if (status >= BR_ERR_INVALID_ARGUMENT && status <= BR_ERR_IO) {
    return br::to_string(static_cast<br::ErrorCode>(static_cast<int>(status)));
  }
  return "unknown status";
}

const char* br_last_error_message(void) { return last_error.c_str(); }

void br_ring_params_default(br_ring_params* p) {
  if (p == nullptr) return;
  const br::RingParams d;
  *p = {d.beta, d.lambda1, d.gamma, d.a_sharp, d.b_width, d.k0};
}

br_status br_pauli_exp(double x, double k0, const double kappa[3], br_matrix2* out) {
  return guarded([&] {
    need(kappa, "kappa");
    need(out, "out");
    *out = to_c(br::pauli_exp(x, {k0, {kappa[0], kappa[1], kappa[2]}}));
  });
}

br_status br_ring_create_standard(double alpha, const br_ring_params* params, br_ring** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    br::RingParams p;
    if (params) p = {params->beta, params->lambda1, params->gamma, params->a_sharp, params->b_width, params->k0};
    auto ring = std::make_unique<br_ring>();
    ring->impl = std::make_unique<br::RingPath>(br::standard_ring(alpha, p));
    *out = ring.release();
  });
}

void br_ring_destroy(br_ring* ring) { delete ring; }

br_status br_ring_length(const br_ring* ring, double* out) {
  return guarded([&] {
    need(ring, "ring");
    need(out, "out");
    *out = ring->impl->total_length();
  });
}

br_status br_ring_kappa_at(const br_ring* ring, double u, double* k0, double kappa[3]) {
  return guarded([&] {
    need(ring, "ring");
    need(kappa, "kappa");
    const auto s = ring->impl->kappa_at(u);
    if (k0) *k0 = s.k0;
    kappa[0] = s.kappa.x;
    kappa[1] = s.kappa.y;
    kappa[2] = s.kappa.z;
  });
}

br_status br_monodromy(const br_ring* ring, int steps_per_unit_length, br_matrix2* out) {
  return guarded([&] {
    need(ring, "ring");
    need(out, "out");
    *out = to_c(br::monodromy(*ring->impl, integration(steps_per_unit_length)));
  });
}

br_status br_solid_angle(const br_ring* ring, size_t n_samples, double* out) {
  return guarded([&] {
    need(ring, "ring");
    need(out, "out");
    *out = br::solid_angle(*ring->impl, n_samples);
  });
}

br_status br_s_matrix(const br_matrix2* m, double xi_c, double theta_t, double xi_l, br_matrix2* out) {
  return guarded([&] {
    need(m, "m");
    need(out, "out");
    *out = to_c(br::s_matrix(from_c(*m), br::CouplerParams::from_loss(xi_c, theta_t, xi_l)));
  });
}

br_status br_bessel_j0(double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = br::bessel_j0(x);
  });
}

br_status br_pz_half_circle(double lambda, double gamma, br_zener_method method, int steps_per_unit_length,
                            double* out) {
  return guarded([&] {
    need(out, "out");
    br::LambdaZeroOptions opt;
    opt.method = method_of(method);
    opt.gamma = gamma;
    opt.integration = integration(steps_per_unit_length);
    *out = br::pz_half_circle(lambda, opt);
  });
}

br_status br_pz_straight_line(double delta, double gamma, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = br::pz_straight_line(delta, gamma).p_z;
  });
}

br_status br_pz_ring_estimate(double alpha, double beta, double lambda1, double gamma, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = br::pz_ring_estimate(alpha, beta, lambda1, gamma).p_z;
  });
}

br_status br_find_lambda_zeros(size_t count, double resolution, br_zener_method method, double* out) {
  return guarded([&] {
    need(out, "out");
    br::LambdaZeroOptions opt;
    opt.method = method_of(method);
    const auto zeros = br::find_lambda_zeros(count, resolution, opt);
    for (std::size_t i = 0; i < count; ++i) out[i] = zeros[i];
  });
}

br_status br_config_create(const char* path, const char* scenario, const char* default_output_dir,
                           br_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto c = std::make_unique<br_config>();
    if (path) c->source.file = path;
    if (scenario) c->source.scenario = scenario;
    if (default_output_dir) c->source.default_output_dir = default_output_dir;
    reload(c.get());
    *out = c.release();
  });
}

void br_config_destroy(br_config* config) { delete config; }

br_status br_config_set(br_config* config, const char* key_value) {
  return guarded([&] {
    need(config, "config");
    need(key_value, "key_value");
    config->source.overrides.emplace_back(key_value);
    try {
      reload(config);
    } catch (...) {
      config->source.overrides.pop_back();
      throw;
    }
  });
}

br_status br_config_set_output_dir(br_config* config, const char* dir) {
  return guarded([&] {
    need(config, "config");
    need(dir, "dir");
    const auto previous = config->source.output_dir;
    config->source.output_dir = dir;
    try {
      reload(config);
    } catch (...) {
      config->source.output_dir = previous;
      throw;
    }
  });
}

br_status br_config_hash(const br_config* config, uint64_t* out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = config->impl->hash;
  });
}

const char* br_config_canonical(const br_config* config) {
  return config ? config->impl->canonical.c_str() : "";
}

const char* br_config_output_dir(const br_config* config) {
  return config ? config->impl->output_dir.c_str() : "";
}

const char* br_default_config(void) {
  static const std::string text = br::default_config_text();
  return text.c_str();
}

br_status br_run(const br_config* config) {
  return guarded([&] {
    need(config, "config");
    br::run_scenario(*config->impl);
  });
}

br_status br_emit_plots(const char* dir) {
  return guarded([&] {
    need(dir, "dir");
    br::emit_plots(dir);
  });
}

}  // extern "C"
