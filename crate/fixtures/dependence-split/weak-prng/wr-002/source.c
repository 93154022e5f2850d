#include <stdlib.h>

unsigned int token_1(void) {
    return (unsigned int)rand();
}
