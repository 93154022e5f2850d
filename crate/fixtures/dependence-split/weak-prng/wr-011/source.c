#include <stdlib.h>

unsigned int token_10(void) {
    return (unsigned int)rand();
}
