#include <stdio.h>
#include <string.h>

#include "earcomb.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,          \
              earcomb_last_error() ? earcomb_last_error() : "-");     \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  EarcombInstance *b4 = NULL;
  CHECK(earcomb_boolean(4, &b4) == EARCOMB_STATUS_OK);
  CHECK(earcomb_instance_d(b4) == 4);

  size_t s[] = {1, 3};
  char *report = NULL;
  CHECK(earcomb_decompose(b4, s, 2, &report) == EARCOMB_STATUS_OK);
  CHECK(strstr(report, "\"passed\":true") != NULL);

  char *verified = NULL;
  CHECK(earcomb_verify(report, &verified) == EARCOMB_STATUS_OK);
  earcomb_string_free(verified);
  earcomb_string_free(report);
  earcomb_instance_free(b4);

  const char *triangles = "{\"vertices\":[1,2,3,4],\"facets\":[[1,2,3],[1,2,4]]}";
  int64_t h[8];
  size_t len = 0;
  CHECK(earcomb_h_vector(triangles, h, 0, &len) == EARCOMB_STATUS_BUFFER_TOO_SMALL);
  CHECK(len == 4);
  CHECK(earcomb_h_vector(triangles, h, 8, &len) == EARCOMB_STATUS_OK);
  CHECK(h[0] == 1 && h[1] == 1 && h[2] == 0 && h[3] == 0);

  size_t t1[] = {1};
  bool dom = false;
  CHECK(earcomb_dominates(4, t1, 1, s, 2, &dom) == EARCOMB_STATUS_OK && dom);

  CHECK(earcomb_boolean(4, NULL) == EARCOMB_STATUS_NULL_POINTER);
  CHECK(earcomb_last_error() != NULL);
  puts("ok");
  return 0;
}
