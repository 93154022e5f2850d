#include <stdlib.h>

unsigned int token_13(void) {
    return (unsigned int)rand();
}
