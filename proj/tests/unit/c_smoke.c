/* The public header has to compile as plain C and link the shared library. */
#include <floqept/floqept.h>

#include <math.h>
#include <stdio.h>

int main(void) {
  floqept_config* cfg = NULL;
  floqept_branches b;
  if (floqept_config_create(&cfg) != FLOQEPT_OK) return 1;
  if (floqept_config_set_double(cfg, "delta0", -186) != FLOQEPT_OK) return 1;
  if (floqept_config_set(cfg, "gamma_c", "93") != FLOQEPT_OK) return 1;
  if (floqept_static_eigen(cfg, &b) != FLOQEPT_OK) return 1;
  floqept_config_destroy(cfg);
  if (b.phase != FLOQEPT_EP || fabs(b.re_plus + 93) > 1e-9) {
    fprintf(stderr, "unexpected static branches: %g %g\n", b.re_plus, b.re_minus);
    return 1;
  }
  printf("floqept %s: ok\n", floqept_version());
  return 0;
}
