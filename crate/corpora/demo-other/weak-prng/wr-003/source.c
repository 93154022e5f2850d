#include <stdlib.h>

long reset_code(void) {
    return lrand48() % 1000000;
}
