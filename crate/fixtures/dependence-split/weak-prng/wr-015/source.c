#include <stdlib.h>

unsigned int token_14(void) {
    return (unsigned int)rand();
}
