/* From-scratch implementation: the component cannot serve this case. */
int sum(int* x, int n)
{
  int s = 0;
  for (int i=0; i < n; ++i)
    s += x[i];
  return s;
}
