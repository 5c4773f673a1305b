#ifndef DELTA_SHAPE_H
#define DELTA_SHAPE_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DsHighlight {
  DS_HIGHLIGHT_NERVE = 0,
  DS_HIGHLIGHT_SPOKES = 1,
  DS_HIGHLIGHT_CHAIN = 2,
  DS_HIGHLIGHT_NONE = 3,
} DsHighlight;

typedef enum DsMode {
  DS_MODE_RECTILINEAR = 0,
  DS_MODE_CURVILINEAR = 1,
  DS_MODE_BOTH = 2,
} DsMode;

typedef enum DsStatus {
  DS_STATUS_OK = 0,
  DS_STATUS_NULL_POINTER = 1,
  DS_STATUS_INVALID_ARGUMENT = 2,
  DS_STATUS_IO = 3,
  DS_STATUS_INSUFFICIENT_KEYPOINTS = 4,
  DS_STATUS_DEGENERATE = 5,
  DS_STATUS_INVALID_CONFIG = 6,
  DS_STATUS_CONSISTENCY = 7,
  DS_STATUS_BUFFER_TOO_SMALL = 8,
  DS_STATUS_INTERNAL = 9,
  DS_STATUS_PANIC = 10,
} DsStatus;

/**
 * A mesh with one B-spline per edge.
 */
typedef struct DsCurvedMesh DsCurvedMesh;

/**
 * A triangulated point set.
 */
typedef struct DsMesh DsMesh;

/**
 * Pipeline settings. `spline_degree` 0 picks the degree per edge.
 */
typedef struct DsPipelineConfig {
  size_t max_keypoints;
  double nms_radius;
  uint32_t spline_degree;
  double interior_weight;
  size_t samples_per_edge;
  enum DsMode mode;
  enum DsHighlight highlight;
} DsPipelineConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ds_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ds_string_free(char *s);

struct DsPipelineConfig ds_pipeline_config_default(void);

/**
 * Delaunay mesh of `n` points given as interleaved `x, y` pairs.
 *
 * # Safety
 * `xy` must point to `2 * n` doubles and `out` to writable storage.
 */
enum DsStatus ds_mesh_from_points(const double *xy, size_t n, struct DsMesh **out_mesh);

/**
 * Detects keypoints in an image file and meshes them. `config` may be null
 * for the defaults.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `config` null or valid.
 */
enum DsStatus ds_mesh_from_image(const char *path,
                                 const struct DsPipelineConfig *config,
                                 struct DsMesh **out_mesh);

/**
 * # Safety
 * `mesh` must be null or a handle from this library not yet freed.
 */
void ds_mesh_free(struct DsMesh *mesh);

/**
 * # Safety
 * Pointers must be valid.
 */
enum DsStatus ds_mesh_vertex_count(const struct DsMesh *mesh, size_t *count);

/**
 * # Safety
 * Pointers must be valid.
 */
enum DsStatus ds_mesh_triangle_count(const struct DsMesh *mesh, size_t *count);

/**
 * Copies vertex positions as `x, y` pairs into `xy`, which holds `cap`
 * doubles.
 *
 * # Safety
 * `xy` must point to `cap` writable doubles.
 */
enum DsStatus ds_mesh_vertices(const struct DsMesh *mesh, double *xy, size_t cap);

/**
 * Copies triangles as increasing vertex index triples into `idx`, which
 * holds `cap` integers.
 *
 * # Safety
 * `idx` must point to `cap` writable integers.
 */
enum DsStatus ds_mesh_triangles(const struct DsMesh *mesh, uint32_t *idx, size_t cap);

/**
 * The vertex with the most incident triangles (lowest index on ties) and
 * how many there are.
 *
 * # Safety
 * Pointers must be valid.
 */
enum DsStatus ds_mesh_max_nerve(const struct DsMesh *mesh, uint32_t *nucleus, size_t *nerve_size);

/**
 * Writes the spoke level of every triangle around `nucleus` into `levels`
 * (in triangle order; -1 for triangles not connected to the nucleus) and
 * the deepest level into `depth`.
 *
 * # Safety
 * `levels` must point to `cap` writable integers; `depth` must be valid.
 */
enum DsStatus ds_mesh_spoke_levels(const struct DsMesh *mesh,
                                   uint32_t nucleus,
                                   int32_t *levels,
                                   size_t cap,
                                   size_t *depth);

/**
 * Mesh as JSON `{"vertices": [[x, y, score]...], "triangles": [[i, j, k]...]}`.
 *
 * # Safety
 * Pointers must be valid; free the result with [`ds_string_free`].
 */
enum DsStatus ds_mesh_to_json(const struct DsMesh *mesh, char **json);

/**
 * Bends every mesh edge into a B-spline. Interior control points get
 * `interior_weight`; `degree` 0 picks 2 or 3 per edge.
 *
 * # Safety
 * Pointers must be valid.
 */
enum DsStatus ds_curved_mesh_new(const struct DsMesh *mesh,
                                 double interior_weight,
                                 uint32_t degree,
                                 struct DsCurvedMesh **out_curved);

/**
 * # Safety
 * `cm` must be null or a handle from this library not yet freed.
 */
void ds_curved_mesh_free(struct DsCurvedMesh *cm);

/**
 * Samples every spline and reports whether all samples stay within the
 * convex hull of the mesh vertices, and the largest distance outside.
 *
 * # Safety
 * Pointers must be valid.
 */
enum DsStatus ds_curved_mesh_hull_containment(const struct DsCurvedMesh *cm,
                                              size_t samples_per_edge,
                                              bool *contained,
                                              double *worst);

/**
 * Writes `n` samples of the spline on edge `a-b` as `x, y` pairs.
 *
 * # Safety
 * `xy` must point to `2 * n` writable doubles.
 */
enum DsStatus ds_curved_mesh_sample_edge(const struct DsCurvedMesh *cm,
                                         uint32_t a,
                                         uint32_t b,
                                         size_t n,
                                         double *xy);

/**
 * Curved mesh as JSON with a `"splines"` object keyed by `"i-j"`.
 *
 * # Safety
 * Pointers must be valid; free the result with [`ds_string_free`].
 */
enum DsStatus ds_curved_mesh_to_json(const struct DsCurvedMesh *cm, char **json);

/**
 * Runs the whole pipeline on an image file and writes `mesh.json`,
 * `decomposition.json` and `overlay.svg` into `out_dir`. `config` may be
 * null for the defaults.
 *
 * # Safety
 * Strings must be NUL-terminated; `config` null or valid.
 */
enum DsStatus ds_pipeline_run(const char *image,
                              const char *out_dir,
                              const struct DsPipelineConfig *config);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DELTA_SHAPE_H */
