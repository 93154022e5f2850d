#include <stdio.h>
#include <sqlite3.h>

int find_user_2(sqlite3 *db, const char *login) {
    char query[256];
    snprintf(query, sizeof(query), "SELECT id FROM users WHERE name = '%s'", login);
    return sqlite3_exec(db, query, NULL, NULL, NULL);
}
