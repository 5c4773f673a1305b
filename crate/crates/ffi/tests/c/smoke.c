#include <stdio.h>
#include <string.h>

#include "delta_shape.h"

#define CHECK(expr)                                                        \
    do {                                                                   \
        DsStatus s_ = (expr);                                              \
        if (s_ != DS_STATUS_OK) {                                          \
            const char *m_ = ds_last_error();                              \
            fprintf(stderr, "%s -> %d: %s\n", #expr, (int)s_, m_ ? m_ : ""); \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    const double xy[] = {0, 0, 4, 0, 4, 4, 0, 4, 1, 2};
    DsMesh *mesh = NULL;
    CHECK(ds_mesh_from_points(xy, 5, &mesh));

    size_t nt = 0;
    CHECK(ds_mesh_triangle_count(mesh, &nt));
    uint32_t nucleus = 0;
    size_t nerve = 0;
    CHECK(ds_mesh_max_nerve(mesh, &nucleus, &nerve));

    DsCurvedMesh *cm = NULL;
    CHECK(ds_curved_mesh_new(mesh, 1.0, 0, &cm));
    bool inside = false;
    double worst = 0.0;
    CHECK(ds_curved_mesh_hull_containment(cm, 32, &inside, &worst));

    char *json = NULL;
    CHECK(ds_curved_mesh_to_json(cm, &json));
    int has_splines = strstr(json, "\"splines\"") != NULL;
    ds_string_free(json);

    DsMesh *other = NULL;
    DsStatus bad = ds_mesh_from_points(xy, 2, &other);
    printf("triangles=%zu nucleus=%u nerve=%zu contained=%d splines=%d degenerate=%d\n",
           nt, nucleus, nerve, (int)inside, has_splines, bad == DS_STATUS_DEGENERATE);

    ds_curved_mesh_free(cm);
    ds_mesh_free(mesh);
    return 0;
}
