#include <stdlib.h>

unsigned int token_0(void) {
    return (unsigned int)rand();
}
