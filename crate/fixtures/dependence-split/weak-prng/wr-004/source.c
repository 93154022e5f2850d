#include <stdlib.h>

unsigned int token_3(void) {
    return (unsigned int)rand();
}
