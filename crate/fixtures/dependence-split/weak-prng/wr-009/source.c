#include <stdlib.h>

unsigned int token_8(void) {
    return (unsigned int)rand();
}
