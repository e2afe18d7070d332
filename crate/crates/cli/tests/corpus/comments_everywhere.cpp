/* leading */ int /* between */ x /* before = */ = /* after = */ 1 /* before ; */;
// trailing line comment with "quote and { brace
int y = 2; // another } one
/*
 * block with // line comment marker and "unterminated quote
 * and ''' apostrophes
 */
int z = /* nested-looking /* start */ 3;
int w = 4; /* multi
              line */ int v = 5;
