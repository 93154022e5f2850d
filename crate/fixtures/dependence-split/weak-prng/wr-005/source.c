#include <stdlib.h>

unsigned int token_4(void) {
    return (unsigned int)rand();
}
