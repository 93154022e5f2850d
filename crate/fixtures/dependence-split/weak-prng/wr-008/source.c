#include <stdlib.h>

unsigned int token_7(void) {
    return (unsigned int)rand();
}
