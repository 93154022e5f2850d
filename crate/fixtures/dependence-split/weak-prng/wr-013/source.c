#include <stdlib.h>

unsigned int token_12(void) {
    return (unsigned int)rand();
}
