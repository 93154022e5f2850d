#include <stdlib.h>

unsigned int token_11(void) {
    return (unsigned int)rand();
}
