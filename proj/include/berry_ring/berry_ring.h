#ifndef BERRY_RING_H
#define BERRY_RING_H

#include <stddef.h>
#include <stdint.h>

#if defined(BR_BUILDING_LIBRARY)
#define BR_API __attribute__((visibility("default")))
#else
#define BR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum br_status {
  BR_OK = 0,
  BR_ERR_INVALID_ARGUMENT = 1,
  BR_ERR_CONTRACT_VIOLATION = 2,
  BR_ERR_SINGULAR_MATRIX = 3,
  BR_ERR_DOMAIN = 4,
  BR_ERR_DEGENERACY = 5,
  BR_ERR_SINGULARITY = 6,
  BR_ERR_SEARCH = 7,
  BR_ERR_ANALYSIS = 8,
  BR_ERR_NUMERICAL = 9,
  BR_ERR_CONFIG = 10,
  BR_ERR_IO = 11,
  BR_ERR_NULL_POINTER = 12,
  BR_ERR_INTERNAL = 13
} br_status;

typedef enum br_zener_method {
  BR_ZENER_PERTURBATIVE = 0,
  BR_ZENER_NUMERIC = 1,
  BR_ZENER_CLOSED_FORM = 2
} br_zener_method;

typedef struct br_complex {
  double re;
  double im;
} br_complex;

typedef struct br_matrix2 {
  br_complex m11, m12, m21, m22;
} br_matrix2;

typedef struct br_ring_params {
  double beta;
  double lambda1;
  double gamma;
  double a_sharp;
  double b_width;
  double k0;
} br_ring_params;

typedef struct br_ring br_ring;
typedef struct br_config br_config;

BR_API const char* br_version(void);
BR_API const char* br_status_string(br_status status);

/* Message of the last failure on the calling thread; empty after success. */
BR_API const char* br_last_error_message(void);

BR_API void br_ring_params_default(br_ring_params* params);

/* exp(i x K) with K = k0 I + kappa . sigma. */
BR_API br_status br_pauli_exp(double x, double k0, const double kappa[3], br_matrix2* out);

/* Half circle followed by the perturbed diameter; params may be NULL for defaults. */
BR_API br_status br_ring_create_standard(double alpha, const br_ring_params* params, br_ring** out);
BR_API void br_ring_destroy(br_ring* ring);
BR_API br_status br_ring_length(const br_ring* ring, double* out);
BR_API br_status br_ring_kappa_at(const br_ring* ring, double u, double* k0, double kappa[3]);

/* Monodromy in the coupler eigenbasis; steps_per_unit_length <= 0 selects the default. */
BR_API br_status br_monodromy(const br_ring* ring, int steps_per_unit_length, br_matrix2* out);
BR_API br_status br_solid_angle(const br_ring* ring, size_t n_samples, double* out);

BR_API br_status br_s_matrix(const br_matrix2* m, double xi_c, double theta_t, double xi_l, br_matrix2* out);

BR_API br_status br_bessel_j0(double x, double* out);
BR_API br_status br_pz_half_circle(double lambda, double gamma, br_zener_method method,
                                   int steps_per_unit_length, double* out);
BR_API br_status br_pz_straight_line(double delta, double gamma, double* out);
BR_API br_status br_pz_ring_estimate(double alpha, double beta, double lambda1, double gamma, double* out);

/* Writes `count` zeros of p_z(Lambda) on the half circle into out. */
BR_API br_status br_find_lambda_zeros(size_t count, double resolution, br_zener_method method, double* out);

/* Configuration: defaults, then the file (may be NULL), then overrides.
   default_output_dir (may be NULL) replaces the built-in output directory
   before the file is read. A non-NULL scenario wins over the file. */
BR_API br_status br_config_create(const char* path, const char* scenario, const char* default_output_dir,
                                  br_config** out);
BR_API void br_config_destroy(br_config* config);
/* Applies a "dotted.key=value" override and revalidates. */
BR_API br_status br_config_set(br_config* config, const char* key_value);
BR_API br_status br_config_set_output_dir(br_config* config, const char* dir);
BR_API br_status br_config_hash(const br_config* config, uint64_t* out);
/* Canonical JSON of the merged configuration; valid until the next call on this config. */
BR_API const char* br_config_canonical(const br_config* config);
BR_API const char* br_config_output_dir(const br_config* config);

/* Default configuration as JSON text (static storage). */
BR_API const char* br_default_config(void);

BR_API br_status br_run(const br_config* config);

/* Writes plot scripts for every result CSV in dir. */
BR_API br_status br_emit_plots(const char* dir);

#ifdef __cplusplus
}
#endif

#endif
