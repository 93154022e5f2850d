#include <stdlib.h>
#include <time.h>

int session_token(void) {
    srand(time(NULL));
    return rand();
}
