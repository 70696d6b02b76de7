#include <stdio.h>
#include "subset_metric.h"

static const char *TEXT =
    "{\"space\": {\"kind\": \"hamming\", \"alphabet\": \"01\", \"length\": 3},"
    " \"m_function\": {\"kind\": \"constant\", \"value\": 3},"
    " \"sets\": {\"A\": [\"000\"], \"B\": [\"011\", \"111\"]}}";

int main(void) {
    SmWorkspace *ws = NULL;
    double value = 0.0;
    if (sm_workspace_parse(TEXT, &ws) != SM_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", sm_last_error());
        return 1;
    }
    if (sm_distance(ws, "A", "B", SM_METRIC_SUBSET, &value) != SM_STATUS_OK) {
        fprintf(stderr, "distance: %s\n", sm_last_error());
        return 1;
    }
    SmStatus missing = sm_distance(ws, "A", "Z", SM_METRIC_SUBSET, &value);
    sm_workspace_free(ws);
    printf("%g %d\n", value, (int)missing);
    return missing == SM_STATUS_UNKNOWN_SET ? 0 : 1;
}
