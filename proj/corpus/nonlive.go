package main

// The goroutine never leaves its loop, so the send is unreachable and the
// main goroutine blocks forever; the model cannot observe this.
func main() {
	ch := make(chan int)
	go func() {
		for {
		}
		ch <- 1
	}()
	<-ch
}
