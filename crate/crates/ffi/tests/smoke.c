#include <stdio.h>

#include "loopbound.h"

int main(void) {
    LbOnParams *p = NULL;
    LbWeights *w = NULL;
    double r = 1.0;
    LbStatus s = lb_on_params_new(0.3, 0.2, 0.4, 1.0, &p);
    if (s != LB_STATUS_OK) {
        fprintf(stderr, "params: %s\n", lb_status_message(s));
        return 1;
    }
    s = lb_weights_on_boundary(p, LB_BRANCH_REAL, &w);
    if (s == LB_STATUS_OK) s = lb_on_boundary_residual(p, LB_BRANCH_REAL, w, &r);
    if (s != LB_STATUS_OK || r > 1e-10) {
        fprintf(stderr, "residual %g: %s\n", r, lb_status_message(s));
        return 1;
    }
    lb_weights_free(w);
    lb_on_params_free(p);
    printf("loopbound %s ok\n", lb_version());
    return 0;
}
