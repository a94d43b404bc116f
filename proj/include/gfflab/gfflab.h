#ifndef GFFLAB_GFFLAB_H
#define GFFLAB_GFFLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(GFFLAB_BUILDING)
#define GFL_API __attribute__((visibility("default")))
#else
#define GFL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gfl_status {
  GFL_OK = 0,
  GFL_EINVAL = 1,
  GFL_EGEOMETRY = 2,
  GFL_ESINGULAR = 3,
  GFL_EDEGENERATE = 4,
  GFL_ECONFIG = 5,
  GFL_EIO = 6,
  GFL_ERUNTIME = 7
} gfl_status;

typedef struct gfl_graph gfl_graph;
typedef struct gfl_field gfl_field;
typedef struct gfl_config gfl_config;

GFL_API const char* gfl_version(void);
/* Message of the last failed call on this thread. */
GFL_API const char* gfl_last_error(void);

/* Geometry */
GFL_API gfl_status gfl_graph_box(int n, gfl_graph** out);
GFL_API gfl_status gfl_graph_window(int n, gfl_graph** out);
GFL_API gfl_status gfl_graph_torus(int n, gfl_graph** out);
GFL_API void gfl_graph_free(gfl_graph* g);
GFL_API int gfl_graph_size(const gfl_graph* g);

/* Green's function killed on the graph boundary, at coordinates (x1,y1), (x2,y2). */
GFL_API gfl_status gfl_green(const gfl_graph* g, double mass, int x1, int y1, int x2, int y2, double* out);

/* Fields */
GFL_API gfl_status gfl_field_sample(const gfl_graph* g, int N, double mass, uint64_t seed, gfl_field** out);
GFL_API gfl_status gfl_field_load(const char* path, gfl_field** out);
GFL_API gfl_status gfl_field_save(const gfl_field* f, const char* path);
GFL_API gfl_status gfl_field_value(const gfl_field* f, int x, int y, int component, double* out);
GFL_API int gfl_field_components(const gfl_field* f);
GFL_API void gfl_field_free(gfl_field* f);

/* Experiments */
GFL_API gfl_status gfl_config_load(const char* path, gfl_config** out);
GFL_API gfl_status gfl_config_parse(const char* text, gfl_config** out);
GFL_API gfl_status gfl_config_set_seed(gfl_config* c, uint64_t seed);
GFL_API gfl_status gfl_config_set_out(gfl_config* c, const char* dir);
GFL_API gfl_status gfl_config_set_workers(gfl_config* c, int workers);
GFL_API int gfl_config_workers(const gfl_config* c);
GFL_API const char* gfl_config_experiment(const gfl_config* c);
GFL_API void gfl_config_free(gfl_config* c);

/* Runs the experiment and appends records under the configured output directory.
   workers_source is recorded in the run manifest ("config", "env" or "flag"). */
GFL_API gfl_status gfl_run(const gfl_config* c, int workers, const char* workers_source, size_t* records_out);

/* Angle image of a saved field; components may be NULL when N = 2. */
GFL_API gfl_status gfl_render_field(const char* field_path, const char* image_path, const char* palette,
                                    const int* components);
/* Exit-set overlay on top of the angle image of a saved field. */
GFL_API gfl_status gfl_render_exit_overlay(const char* field_path, const char* image_path, double R, int k);
GFL_API double gfl_render_memory_estimate(int n);
GFL_API gfl_status gfl_render_massive(int n, double mass, uint64_t seed, const char* image_path, const char* palette);

GFL_API gfl_status gfl_report(const char* records_path, const char* out_dir, size_t* files_out);

/* Quick internal consistency checks; one line per check is passed to sink. */
GFL_API gfl_status gfl_selftest(void (*sink)(const char* line, void* user), void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif
